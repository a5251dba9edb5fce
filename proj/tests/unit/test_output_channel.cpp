#include <modgamp/output_channel.hpp>

#include "../support/channel_tuples.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace modgamp;
using modgamp::testing::ChannelTuple;
using modgamp::testing::draw_channel_tuple;
using modgamp::testing::rel_err_repr;
using modgamp::testing::rel_err_variance;
using modgamp::testing::TupleGen;

namespace {

PosteriorMoments channel_moments(const ChannelTuple& t, double truncation = kDefaultTruncationSigmas) {
  return modulo_awgn_moments(t.y, PseudoPrior{t.mu, t.var},
                             ModuloAwgnChannel(FoldingThreshold(t.lambda), t.noise), truncation);
}

modgamp::testing::OracleMoments channel_oracle(const ChannelTuple& t) {
  if (t.noise == 0.0) return modgamp::testing::sr_adc_oracle(t.y, t.mu, t.var, t.lambda);
  return modgamp::testing::modulo_awgn_oracle(t.y, t.mu, t.var, t.noise, t.lambda);
}

}  // namespace

TEST_CASE("channel arguments are validated") {
  CHECK_THROWS_AS(ModuloAwgnChannel(FoldingThreshold(1.0), -0.1), std::domain_error);
  const FoldingThreshold one(1.0);
  CHECK_THROWS_AS(sr_adc_moments(1.0, {0.0, 1.0}, one), std::domain_error);
  CHECK_THROWS_AS(sr_adc_moments(-1.01, {0.0, 1.0}, one), std::domain_error);
  CHECK_THROWS_AS(sr_adc_moments(0.2, {0.0, 0.0}, one), std::domain_error);
  CHECK_THROWS_AS(awgn_moments(0.2, {0.0, 1.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(awgn_moments(0.2, {0.0, -1.0}, 1.0), std::domain_error);
  CHECK_THROWS_AS(sr_adc_moments(0.2, {std::nan(""), 1.0}, one), NumericalError);
}

TEST_CASE("sr_adc_moments reference values") {
  SUBCASE("no folding when lambda dwarfs the pseudo-prior") {
    const PosteriorMoments m = sr_adc_moments(0.37, {0.2, 0.05}, FoldingThreshold(1e6));
    CHECK(m.mean == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(m.variance == 0.0);
  }
  SUBCASE("y = mu = 0 is exactly symmetric") {
    for (double var : {1e-3, 0.5, 3.0, 40.0}) {
      CHECK(sr_adc_moments(0.0, {0.0, var}, FoldingThreshold(1.0)).mean == 0.0);
    }
  }
  SUBCASE("brute force over k in [-50, 50]") {
    const PosteriorMoments m = sr_adc_moments(0.3, {1.7, 0.5}, FoldingThreshold(1.0));
    const auto o = modgamp::testing::sr_adc_oracle(0.3L, 1.7L, 0.5L, 1.0L);
    CHECK(rel_err_repr(m.mean, static_cast<double>(o.mean)) <= 1e-10);
    CHECK(rel_err_repr(m.variance, static_cast<double>(o.variance)) <= 1e-10);
    CHECK(rel_err_repr(m.log_evidence, static_cast<double>(o.log_evidence)) <= 1e-10);
  }
}

TEST_CASE("awgn_moments reference values") {
  const PosteriorMoments m = awgn_moments(1.0, {0.0, 1.0}, 1.0);
  CHECK(m.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.variance == doctest::Approx(0.5).epsilon(1e-15));
  const auto o = modgamp::testing::awgn_oracle(1.0L, 0.0L, 1.0L, 1.0L);
  CHECK(rel_err_repr(m.mean, static_cast<double>(o.mean)) <= 1e-10);
  CHECK(rel_err_repr(m.variance, static_cast<double>(o.variance)) <= 1e-10);
  CHECK(rel_err_repr(m.log_evidence, static_cast<double>(o.log_evidence)) <= 1e-10);

  const PosteriorMoments agree = awgn_moments(0.42, {0.42, 0.3}, 0.2);
  CHECK(agree.mean == doctest::Approx(0.42).epsilon(1e-15));

  const PosteriorMoments vague = awgn_moments(5.0, {-1.0, 2.0}, 1e14);
  CHECK(vague.mean == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(vague.variance == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("modulo_awgn_moments reference values and limits") {
  const FoldingThreshold one(1.0);
  SUBCASE("noiseless channel delegates to the SR-ADC posterior") {
    const PosteriorMoments a = modulo_awgn_moments(0.3, {1.7, 0.5}, ModuloAwgnChannel(one, 0.0));
    const PosteriorMoments b = sr_adc_moments(0.3, {1.7, 0.5}, one);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(a.log_evidence == b.log_evidence);
  }
  SUBCASE("huge lambda is the plain AWGN posterior") {
    const PosteriorMoments a =
        modulo_awgn_moments(0.3, {1.7, 0.5}, ModuloAwgnChannel(FoldingThreshold(1e6), 0.1));
    const PosteriorMoments b = awgn_moments(0.3, {1.7, 0.5}, 0.1);
    CHECK(rel_err_repr(a.mean, b.mean) <= 1e-12);
    CHECK(rel_err_repr(a.variance, b.variance) <= 1e-12);
    CHECK(rel_err_repr(a.log_evidence, b.log_evidence) <= 1e-12);
  }
  SUBCASE("2-D quadrature-plus-sum oracle") {
    const PosteriorMoments m = modulo_awgn_moments(0.3, {1.7, 0.5}, ModuloAwgnChannel(one, 0.1));
    const auto o = modgamp::testing::modulo_awgn_oracle(0.3L, 1.7L, 0.5L, 0.1L, 1.0L);
    CHECK(rel_err_repr(m.mean, static_cast<double>(o.mean)) <= 1e-6);
    CHECK(rel_err_repr(m.variance, static_cast<double>(o.variance)) <= 1e-6);
    CHECK(rel_err_repr(m.log_evidence, static_cast<double>(o.log_evidence)) <= 1e-6);
  }
}

TEST_CASE("folded channel matches brute-force oracles on random tuples") {
  TupleGen gen(31);
  double worst = 0.0;
  for (int i = 0; i < 150; ++i) {
    const ChannelTuple t = draw_channel_tuple(gen);
    const PosteriorMoments got = channel_moments(t);
    const auto want = channel_oracle(t);
    worst = std::max({worst, rel_err_repr(got.mean, static_cast<double>(want.mean)),
                      rel_err_variance(got.variance, static_cast<double>(want.variance),
                                       got.mean, t.lambda),
                      rel_err_repr(got.log_evidence, static_cast<double>(want.log_evidence))});
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("folded channel invariants") {
  TupleGen gen(32);
  for (int i = 0; i < 300; ++i) {
    const ChannelTuple t = draw_channel_tuple(gen);
    const PosteriorMoments base = channel_moments(t);
    CHECK(base.variance >= 0.0);

    // Doubling the truncation window changes nothing measurable.
    const PosteriorMoments wide = channel_moments(t, 2 * kDefaultTruncationSigmas);
    CHECK(rel_err_repr(wide.mean, base.mean) <= 1e-10);
    CHECK(rel_err_variance(wide.variance, base.variance, base.mean, t.lambda) <= 1e-10);

    // Shifting the pseudo-prior by one period shifts the posterior mean.
    ChannelTuple shifted = t;
    shifted.mu += 2 * t.lambda;
    const PosteriorMoments s = channel_moments(shifted);
    CHECK(std::abs(s.mean - (base.mean + 2 * t.lambda)) <=
          1e-10 * std::max(1.0, std::abs(s.mean)));
    CHECK(rel_err_variance(s.variance, base.variance, s.mean, t.lambda) <= 1e-8);
  }
}

TEST_CASE("evidence integrates to one over the fold interval") {
  TupleGen gen(33);
  for (int i = 0; i < 40; ++i) {
    const ChannelTuple t = draw_channel_tuple(gen);
    const ModuloAwgnChannel ch(FoldingThreshold(t.lambda), t.noise);
    // f_y is smooth and 2*lambda-periodic, so an equispaced rule converges
    // spectrally.
    const int points = 40000;
    const double h = 2 * t.lambda / points;
    double total = 0.0;
    for (int k = 0; k < points; ++k) {
      const double y = -t.lambda + k * h;
      total += std::exp(modulo_awgn_moments(y, {t.mu, t.var}, ch).log_evidence) * h;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("output_denoise") {
  SUBCASE("identity channel") {
    const ModuloAwgnChannel ch(FoldingThreshold(1e6), 0.0);
    const OutputUpdate u = output_denoise(0.4, 0.1, 0.25, ch);
    CHECK(u.s_hat == doctest::Approx((0.4 - 0.1) / 0.25).epsilon(1e-14));
    CHECK(u.v_s == doctest::Approx(1.0 / 0.25).epsilon(1e-14));
  }
  SUBCASE("dense lattice carries no information") {
    const ModuloAwgnChannel ch(FoldingThreshold(1e-3), 0.0);
    const OutputUpdate u = output_denoise(0.0005, 0.3, 2.0, ch);
    CHECK(u.v_s == kDefaultVarianceFloor);
    CHECK(std::abs(u.s_hat) < 1e-12);
  }
  SUBCASE("F1 is the score of the evidence") {
    TupleGen gen(34);
    for (int i = 0; i < 200; ++i) {
      const ChannelTuple t = draw_channel_tuple(gen);
      const ModuloAwgnChannel ch(FoldingThreshold(t.lambda), t.noise);
      const OutputUpdate u = output_denoise(t.y, t.mu, t.var, ch);
      const double h = 1e-4 * std::sqrt(t.var + t.noise);
      const double up = modulo_awgn_moments(t.y, {t.mu + h, t.var}, ch).log_evidence;
      const double dn = modulo_awgn_moments(t.y, {t.mu - h, t.var}, ch).log_evidence;
      const double fd = (up - dn) / (2 * h);
      CHECK(std::abs(u.s_hat - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      CHECK(u.v_s >= kDefaultVarianceFloor);
    }
  }
}
