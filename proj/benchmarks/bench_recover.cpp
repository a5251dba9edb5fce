#include <modgamp/simulator.hpp>

#include <benchmark/benchmark.h>

using namespace modgamp;

namespace {

// One full trial (draw + solve) at the sweep operating point.
void BM_RunTrial(benchmark::State& state) {
  ExperimentParams p;
  p.n_dim = static_cast<int>(state.range(0));
  p.rho = 0.5;
  p.eps = 0.05;
  const SolverConfig cfg = SolverConfig::for_signal_length(p.n_dim);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    p.seed = seed++;
    benchmark::DoNotOptimize(run_trial(p, cfg));
  }
}
BENCHMARK(BM_RunTrial)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_RecoverOnly(benchmark::State& state) {
  ExperimentParams p;
  p.n_dim = static_cast<int>(state.range(0));
  p.rho = 0.7;
  p.eps = 0.05;
  p.seed = 3;
  const TrialData t = simulate_trial(p);
  const SolverConfig cfg = SolverConfig::for_signal_length(p.n_dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recover(t.y, t.matrix, p.prior(), p.channel(), cfg));
  }
}
BENCHMARK(BM_RecoverOnly)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
