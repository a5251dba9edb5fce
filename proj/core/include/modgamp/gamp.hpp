#pragma once

// Generalized approximate message passing for sparse recovery through a
// folded AWGN output channel, vector-variance form (no averaging of the
// per-component variances).

#include <modgamp/output_channel.hpp>
#include <modgamp/prior.hpp>
#include <modgamp/types.hpp>

#include <stdexcept>
#include <vector>

namespace modgamp {

/// A (n x N) together with its element-wise square, which every variance
/// update multiplies by.
class SensingMatrix {
 public:
  explicit SensingMatrix(Matrix a);

  const Matrix& a() const noexcept { return a_; }
  const Matrix& a_squared() const noexcept { return a_sq_; }
  Eigen::Index measurements() const noexcept { return a_.rows(); }
  Eigen::Index signal_length() const noexcept { return a_.cols(); }

 private:
  Matrix a_;
  Matrix a_sq_;
};

struct GampState {
  Vector x_hat;  // N
  Vector v_x;    // N
  Vector s_hat;  // n
  Vector v_s;    // n
  Vector p_hat;  // n
  Vector v_p;    // n
  Vector r_hat;  // N
  Vector v_r;    // N
  int iteration = 0;
};

struct SolverConfig {
  /// Stop once ||x_t - x_{t-1}|| < epsilon_stop * ||x_t||.
  double epsilon_stop = 1e-3;
  int t_max = 128;
  double variance_floor = kDefaultVarianceFloor;
  /// x_t <- damping * x_new + (1 - damping) * x_{t-1}; 1 disables damping.
  double damping = 1.0;

  /// Defaults with t_max = N / 2.
  static SolverConfig for_signal_length(Eigen::Index n_signal);

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct RecoveryResult {
  Vector x_hat;
  int iterations_used = 0;
  bool converged = false;
  /// ||x_t - x_{t-1}|| / ||x_t|| per iteration.
  std::vector<double> per_iteration_residuals;
};

/// Thrown when an iterate becomes non-finite.
class SolverDiverged : public std::runtime_error {
 public:
  SolverDiverged(int iteration, const std::string& what);
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// x = prior mean, v_x = prior variance, s = y; all other vectors sized
/// and zeroed.
GampState gamp_init(const BernoulliGaussianPrior& prior, const Vector& y, Eigen::Index n_signal);

/// v_p = (A.*A) v_x (floored), p = A x - v_p .* s.
void measurement_linear_step(GampState& state, const SensingMatrix& m, double variance_floor);

/// (s, v_s) = output_denoise(y_i, p_i, v_p_i) component-wise.
void measurement_nonlinear_step(GampState& state, const Vector& y, const ModuloAwgnChannel& ch,
                                double variance_floor);

/// v_r = 1 / max((A.*A)^T v_s, floor), r = x + v_r .* (A^T s).
void estimation_linear_step(GampState& state, const SensingMatrix& m, double variance_floor);

/// (x, v_x) = prior_denoise(r_i, v_r_i) component-wise, with optional
/// damping of x against the previous iterate.
void estimation_nonlinear_step(GampState& state, const BernoulliGaussianPrior& prior,
                               double damping = 1.0, double variance_floor = 0.0);

/// True when the relative-change rule or the iteration cap fires. A zero
/// current iterate only satisfies the relative rule if nothing changed.
bool check_convergence(const Vector& x_prev, const Vector& x_curr, const SolverConfig& cfg, int t);

RecoveryResult recover(const Vector& y, const SensingMatrix& m, const BernoulliGaussianPrior& prior,
                       const ModuloAwgnChannel& ch, const SolverConfig& cfg);

}  // namespace modgamp
