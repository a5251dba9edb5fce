#include <modgamp/output_channel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace modgamp {

namespace {

// Above this many branches on each side of the centre the lattice is so
// dense relative to the pseudo-prior width that, by Poisson summation, the
// posterior equals the pseudo-prior and f_y = 1/(2 lambda) to within
// exp(-2 pi^2 * 64^2), far below double precision.
constexpr double kDenseLatticeHalfBranches = 512.0;

void check_observation(double y, FoldingThreshold lambda) {
  if (!(y >= -lambda.value() && y < lambda.value())) {
    throw std::domain_error("observation outside the folding interval [-lambda, lambda)");
  }
}

void check_pseudo_prior(PseudoPrior pp) {
  if (!(pp.variance > 0.0)) {
    throw std::domain_error("pseudo-prior variance must be positive");
  }
  if (!std::isfinite(pp.mean) || !std::isfinite(pp.variance)) {
    throw NumericalError("non-finite pseudo-prior");
  }
}

// Shared kernel for the folded channel. noise_variance = 0 gives the
// noiseless SR-ADC posterior (point masses on the lattice).
PosteriorMoments wrapped_mixture(double y, PseudoPrior pp, double noise_variance,
                                 FoldingThreshold lambda, double truncation_sigmas) {
  const double total = pp.variance + noise_variance;
  const double sd = std::sqrt(total);
  const double period = lambda.period();

  if (truncation_sigmas * sd / period > kDenseLatticeHalfBranches) {
    return {pp.mean, pp.variance, -std::log(period)};
  }

  // Centre branch: the lattice point nearest the pseudo-prior mean.
  const double centre = std::round((pp.mean - y) / period);
  // Offset of the centre branch from mu_z, |d0| <= lambda up to rounding.
  const double d0 = (y - pp.mean) + centre * period;
  const double reach = truncation_sigmas * sd;
  const auto lo = std::min<long long>(-1, static_cast<long long>(std::ceil((-reach - d0) / period)));
  const auto hi = std::max<long long>(1, static_cast<long long>(std::floor((reach - d0) / period)));
  const long long half = std::max(-lo, hi);

  // Log weights indexed by j + half for branch offset j in [-half, half];
  // branches outside [lo, hi] get zero weight.
  std::vector<double> logw(static_cast<std::size_t>(2 * half + 1),
                           -std::numeric_limits<double>::infinity());
  double max_logw = -std::numeric_limits<double>::infinity();
  for (long long j = lo; j <= hi; ++j) {
    const double d = d0 + static_cast<double>(j) * period;
    const double lw = -0.5 * d * d / total;
    logw[static_cast<std::size_t>(j + half)] = lw;
    max_logw = std::max(max_logw, lw);
  }
  std::vector<double> w(logw.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logw[i] - max_logw);

  // Accumulate in +/- pairs around the centre so symmetric inputs give
  // exactly symmetric results (e.g. mean 0 for y = mu_z = 0).
  const auto at = [&](long long j) { return w[static_cast<std::size_t>(j + half)]; };
  double sum_w = at(0);
  double sum_jw = 0.0;
  for (long long j = 1; j <= half; ++j) {
    sum_w += at(j) + at(-j);
    sum_jw += static_cast<double>(j) * (at(j) - at(-j));
  }
  const double mean_offset = d0 + period * sum_jw / sum_w;

  double spread = 0.0;
  for (long long j = -half; j <= half; ++j) {
    const double wj = at(j);
    if (wj == 0.0) continue;
    const double dev = d0 + static_cast<double>(j) * period - mean_offset;
    spread += wj * dev * dev;
  }
  spread /= sum_w;

  // Component means are mu_z + gain * d_k; all components share sigma_wz2.
  const double gain = pp.variance / total;
  const double component_variance = pp.variance * noise_variance / total;

  PosteriorMoments out;
  out.mean = pp.mean + gain * mean_offset;
  out.variance = std::max(0.0, component_variance + gain * gain * spread);
  out.log_evidence =
      max_logw + std::log(sum_w) - 0.5 * std::log(2.0 * std::numbers::pi * total);
  if (!std::isfinite(out.log_evidence) || !std::isfinite(out.mean)) {
    throw NumericalError("folded-channel evidence is not finite");
  }
  return out;
}

}  // namespace

ModuloAwgnChannel::ModuloAwgnChannel(FoldingThreshold lambda, double noise_variance)
    : lambda_(lambda), noise_variance_(noise_variance) {
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::domain_error("noise variance must be finite and non-negative");
  }
}

PosteriorMoments sr_adc_moments(double y, PseudoPrior pp, FoldingThreshold lambda,
                                double truncation_sigmas) {
  check_observation(y, lambda);
  check_pseudo_prior(pp);
  return wrapped_mixture(y, pp, 0.0, lambda, truncation_sigmas);
}

PosteriorMoments awgn_moments(double y, PseudoPrior pp, double noise_variance) {
  check_pseudo_prior(pp);
  if (!(noise_variance > 0.0)) {
    throw std::domain_error("awgn_moments: noise variance must be positive");
  }
  const double joint = 1.0 / (1.0 / noise_variance + 1.0 / pp.variance);
  const double total = pp.variance + noise_variance;
  const double d = y - pp.mean;
  PosteriorMoments out;
  out.mean = (y / noise_variance + pp.mean / pp.variance) * joint;
  out.variance = joint;
  out.log_evidence = -0.5 * (d * d / total + std::log(2.0 * std::numbers::pi * total));
  return out;
}

PosteriorMoments modulo_awgn_moments(double y, PseudoPrior pp, const ModuloAwgnChannel& ch,
                                     double truncation_sigmas) {
  if (ch.noise_variance() == 0.0) {
    return sr_adc_moments(y, pp, ch.lambda(), truncation_sigmas);
  }
  check_observation(y, ch.lambda());
  check_pseudo_prior(pp);
  return wrapped_mixture(y, pp, ch.noise_variance(), ch.lambda(), truncation_sigmas);
}

OutputUpdate output_denoise(double y, double p_hat, double v_p, const ModuloAwgnChannel& ch,
                            double v_s_floor) {
  const PosteriorMoments post = modulo_awgn_moments(y, PseudoPrior{p_hat, v_p}, ch);
  return OutputUpdate{(post.mean - p_hat) / v_p,
                      std::max((v_p - post.variance) / (v_p * v_p), v_s_floor)};
}

}  // namespace modgamp
