#include <modgamp/output_channel.hpp>
#include <modgamp/prior.hpp>

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace modgamp;

namespace {

struct Input {
  double y, mu, var;
};

std::vector<Input> inputs(double lambda, double spread, double var_lo, double var_hi) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> y(-lambda, lambda), mu(-spread, spread);
  std::uniform_real_distribution<double> lv(std::log(var_lo), std::log(var_hi));
  std::vector<Input> v(4096);
  for (auto& in : v) in = {y(rng) * 0.999, mu(rng), std::exp(lv(rng))};
  return v;
}

void BM_PriorDenoise(benchmark::State& state) {
  const BernoulliGaussianPrior prior(0.1, 1.0);
  const auto in = inputs(1.0, 3.0, 1e-4, 10.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const Input& p = in[i++ & 4095];
    benchmark::DoNotOptimize(prior_denoise(p.mu, p.var, prior));
  }
}
BENCHMARK(BM_PriorDenoise);

void BM_SrAdcMoments(benchmark::State& state) {
  const FoldingThreshold lambda(1.0);
  // range(0) scales the pseudo-prior variance, and with it the branch count.
  const double hi = static_cast<double>(state.range(0));
  const auto in = inputs(1.0, 3.0, hi / 10, hi);
  std::size_t i = 0;
  for (auto _ : state) {
    const Input& p = in[i++ & 4095];
    benchmark::DoNotOptimize(sr_adc_moments(p.y, {p.mu, p.var}, lambda));
  }
}
BENCHMARK(BM_SrAdcMoments)->Arg(1)->Arg(10)->Arg(100);

void BM_AwgnMoments(benchmark::State& state) {
  const auto in = inputs(1.0, 3.0, 1e-3, 10.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const Input& p = in[i++ & 4095];
    benchmark::DoNotOptimize(awgn_moments(p.y, {p.mu, p.var}, 0.01));
  }
}
BENCHMARK(BM_AwgnMoments);

void BM_ModuloAwgnMoments(benchmark::State& state) {
  const ModuloAwgnChannel ch(FoldingThreshold(1.0), 0.01);
  const auto in = inputs(1.0, 3.0, 1e-3, 10.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const Input& p = in[i++ & 4095];
    benchmark::DoNotOptimize(modulo_awgn_moments(p.y, {p.mu, p.var}, ch));
  }
}
BENCHMARK(BM_ModuloAwgnMoments);

}  // namespace
