#include <modgamp/gamp.hpp>

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace modgamp {

namespace {

void require_length(const Vector& v, Eigen::Index expected, const char* name) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string("dimension mismatch: ") + name + " has length " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(expected));
  }
}

bool relative_change_small(const Vector& x_prev, const Vector& x_curr, double epsilon_stop) {
  const double change = (x_curr - x_prev).norm();
  const double scale = x_curr.norm();
  if (scale == 0.0) return change == 0.0;
  return change < epsilon_stop * scale;
}

[[maybe_unused]] bool floors_hold(const GampState& s, double floor) {
  return (s.v_p.array() >= floor).all() && (s.v_s.array() >= floor).all() &&
         (s.v_x.array() >= floor).all() && (s.v_r.array() > 0.0).all();
}

}  // namespace

SensingMatrix::SensingMatrix(Matrix a) : a_(std::move(a)), a_sq_(a_.array().square().matrix()) {
  if (a_.rows() < 1 || a_.cols() < 1) {
    throw std::invalid_argument("sensing matrix must be at least 1x1");
  }
}

SolverConfig SolverConfig::for_signal_length(Eigen::Index n_signal) {
  SolverConfig cfg;
  cfg.t_max = std::max<int>(1, static_cast<int>(n_signal / 2));
  return cfg;
}

void SolverConfig::validate() const {
  if (!(epsilon_stop > 0.0)) throw std::invalid_argument("epsilon_stop must be positive");
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (!(variance_floor > 0.0)) throw std::invalid_argument("variance_floor must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
}

SolverDiverged::SolverDiverged(int iteration, const std::string& what)
    : std::runtime_error("GAMP diverged at iteration " + std::to_string(iteration) + ": " + what),
      iteration_(iteration) {}

GampState gamp_init(const BernoulliGaussianPrior& prior, const Vector& y, Eigen::Index n_signal) {
  if (n_signal < 1 || y.size() < 1) {
    throw std::invalid_argument("gamp_init: empty problem");
  }
  const Eigen::Index n = y.size();
  GampState s;
  s.x_hat = Vector::Constant(n_signal, prior.mean());
  s.v_x = Vector::Constant(n_signal, prior.variance());
  s.s_hat = y;
  s.v_s = Vector::Zero(n);
  s.p_hat = Vector::Zero(n);
  s.v_p = Vector::Zero(n);
  s.r_hat = Vector::Zero(n_signal);
  s.v_r = Vector::Zero(n_signal);
  s.iteration = 0;
  return s;
}

void measurement_linear_step(GampState& state, const SensingMatrix& m, double variance_floor) {
  require_length(state.x_hat, m.signal_length(), "x_hat");
  require_length(state.v_x, m.signal_length(), "v_x");
  require_length(state.s_hat, m.measurements(), "s_hat");
  state.v_p = (m.a_squared() * state.v_x).cwiseMax(variance_floor);
  state.p_hat = m.a() * state.x_hat - state.v_p.cwiseProduct(state.s_hat);
}

void measurement_nonlinear_step(GampState& state, const Vector& y, const ModuloAwgnChannel& ch,
                                double variance_floor) {
  require_length(y, state.p_hat.size(), "y");
  require_length(state.v_p, state.p_hat.size(), "v_p");
  state.s_hat.resize(y.size());
  state.v_s.resize(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const OutputUpdate u = output_denoise(y[i], state.p_hat[i], state.v_p[i], ch, variance_floor);
    state.s_hat[i] = u.s_hat;
    state.v_s[i] = u.v_s;
  }
}

void estimation_linear_step(GampState& state, const SensingMatrix& m, double variance_floor) {
  require_length(state.s_hat, m.measurements(), "s_hat");
  require_length(state.v_s, m.measurements(), "v_s");
  require_length(state.x_hat, m.signal_length(), "x_hat");
  const Vector precision = (m.a_squared().transpose() * state.v_s).cwiseMax(variance_floor);
  state.v_r = precision.cwiseInverse();
  state.r_hat = state.x_hat + state.v_r.cwiseProduct(m.a().transpose() * state.s_hat);
}

void estimation_nonlinear_step(GampState& state, const BernoulliGaussianPrior& prior,
                               double damping, double variance_floor) {
  require_length(state.v_r, state.r_hat.size(), "v_r");
  const Eigen::Index n_signal = state.r_hat.size();
  Vector x_new(n_signal);
  state.v_x.resize(n_signal);
  for (Eigen::Index j = 0; j < n_signal; ++j) {
    const PosteriorMoments post = prior_denoise(state.r_hat[j], state.v_r[j], prior);
    x_new[j] = post.mean;
    state.v_x[j] = std::max(post.variance, variance_floor);
  }
  if (damping == 1.0 || state.x_hat.size() != n_signal) {
    state.x_hat = std::move(x_new);
  } else {
    state.x_hat = damping * x_new + (1.0 - damping) * state.x_hat;
  }
}

bool check_convergence(const Vector& x_prev, const Vector& x_curr, const SolverConfig& cfg, int t) {
  require_length(x_curr, x_prev.size(), "x_curr");
  return t >= cfg.t_max || relative_change_small(x_prev, x_curr, cfg.epsilon_stop);
}

RecoveryResult recover(const Vector& y, const SensingMatrix& m, const BernoulliGaussianPrior& prior,
                       const ModuloAwgnChannel& ch, const SolverConfig& cfg) {
  cfg.validate();
  require_length(y, m.measurements(), "y");

  GampState state = gamp_init(prior, y, m.signal_length());
  RecoveryResult result;
  for (int t = 1;; ++t) {
    const Vector x_prev = state.x_hat;
    state.iteration = t;
    try {
      measurement_linear_step(state, m, cfg.variance_floor);
      measurement_nonlinear_step(state, y, ch, cfg.variance_floor);
      estimation_linear_step(state, m, cfg.variance_floor);
      estimation_nonlinear_step(state, prior, cfg.damping, cfg.variance_floor);
    } catch (const NumericalError& e) {
      throw SolverDiverged(t, e.what());
    }
    if (!state.x_hat.allFinite() || !state.v_x.allFinite()) {
      throw SolverDiverged(t, "non-finite estimate");
    }
    assert(floors_hold(state, cfg.variance_floor));

    const double scale = state.x_hat.norm();
    const double change = (state.x_hat - x_prev).norm();
    result.per_iteration_residuals.push_back(scale > 0.0 ? change / scale
                                                         : (change == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()));
    if (check_convergence(x_prev, state.x_hat, cfg, t)) {
      result.converged = relative_change_small(x_prev, state.x_hat, cfg.epsilon_stop);
      result.iterations_used = t;
      break;
    }
  }
  result.x_hat = std::move(state.x_hat);
  return result;
}

}  // namespace modgamp
