#pragma once

// Generative chain x -> z = A x -> y* = z + w -> y = fold(y*) and the
// per-trial metrics used by the Monte-Carlo experiments.

#include <modgamp/gamp.hpp>
#include <modgamp/modulo.hpp>
#include <modgamp/prior.hpp>
#include <modgamp/rng.hpp>

#include <cstdint>
#include <limits>

namespace modgamp {

enum class SparsityMode {
  kBernoulli,   // i.i.d. support, random number of nonzeros
  kFixedCount,  // exactly round(eps * N) nonzeros
};

struct ExperimentParams {
  int n_dim = 256;
  double rho = 0.5;
  double eps = 0.1;
  double sigma2 = 1.0;
  /// +inf means no noise.
  double snr_db = std::numeric_limits<double>::infinity();
  FoldingThreshold lambda{1.0};
  std::uint64_t seed = 0;
  SparsityMode sparsity = SparsityMode::kBernoulli;

  /// n = round(rho * N).
  int measurements() const;
  double noise_variance() const;
  BernoulliGaussianPrior prior() const;
  ModuloAwgnChannel channel() const;
  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct TrialData {
  Vector x;
  SensingMatrix matrix;
  Vector noise;
  Vector y_star;
  Vector y;
  SimpleFunction epsilon_g;
};

struct TrialRecord {
  double mse_db = 0.0;
  bool success = false;
  std::size_t folding_count = 0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// i.i.d. N(0, 1/n) entries.
SensingMatrix draw_sensing_matrix(int n, int n_signal, RngStream& rng);

/// 10^(-snr_db/10); +inf maps to 0.
double snr_to_noise_power(double snr_db);

/// Pure function of params: support, values, matrix and noise each come
/// from an independent stream derived from params.seed.
TrialData simulate_trial(const ExperimentParams& params);

/// 10 log10 ||x - x_hat||^2 (not normalized by N). Returns -inf when the
/// estimate is exact.
double mse_db(const Vector& x, const Vector& x_hat);

inline constexpr double kSuccessThresholdDb = -30.0;

/// mse <= -30 dB.
bool classify_success(double mse_db);

/// simulate -> recover -> metrics. A diverged solve is recorded as a
/// failure with mse_db = +inf.
TrialRecord run_trial(const ExperimentParams& params, const SolverConfig& cfg);

}  // namespace modgamp
