#include <modgamp/simulator.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace modgamp {

int ExperimentParams::measurements() const {
  return static_cast<int>(std::lround(rho * static_cast<double>(n_dim)));
}

double ExperimentParams::noise_variance() const { return snr_to_noise_power(snr_db); }

BernoulliGaussianPrior ExperimentParams::prior() const { return {eps, sigma2}; }

ModuloAwgnChannel ExperimentParams::channel() const { return {lambda, noise_variance()}; }

void ExperimentParams::validate() const {
  if (n_dim < 1) throw std::invalid_argument("n_dim must be at least 1");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("snr_db must be a number or +inf");
  }
  if (measurements() < 1) throw std::invalid_argument("rho * n_dim rounds to zero measurements");
}

SensingMatrix draw_sensing_matrix(int n, int n_signal, RngStream& rng) {
  if (n < 1 || n_signal < 1) throw std::invalid_argument("matrix dimensions must be positive");
  std::normal_distribution<double> entry(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  Matrix a(n, n_signal);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n_signal; ++j) a(i, j) = entry(rng);
  }
  return SensingMatrix(std::move(a));
}

double snr_to_noise_power(double snr_db) {
  if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

TrialData simulate_trial(const ExperimentParams& params) {
  params.validate();
  const int n = params.measurements();
  const auto prior = params.prior();

  RngStream support = make_stream(params.seed, StreamId::kSupport);
  RngStream values = make_stream(params.seed, StreamId::kValues);
  RngStream matrix_rng = make_stream(params.seed, StreamId::kMatrix);
  RngStream noise_rng = make_stream(params.seed, StreamId::kNoise);

  const auto length = static_cast<std::size_t>(params.n_dim);
  Vector x = params.sparsity == SparsityMode::kBernoulli
                 ? prior_sample(prior, length, support, values)
                 : prior_sample_fixed_support(prior, length, support, values);
  SensingMatrix m = draw_sensing_matrix(n, params.n_dim, matrix_rng);

  Vector w = Vector::Zero(n);
  if (const double sw2 = params.noise_variance(); sw2 > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(sw2));
    for (int i = 0; i < n; ++i) w[i] = noise(noise_rng);
  }

  Vector y_star = m.a() * x + w;
  Vector y = fold_vector(y_star, params.lambda);
  SimpleFunction eg{y_star - y, params.lambda};
  return TrialData{std::move(x), std::move(m), std::move(w), std::move(y_star), std::move(y),
                   std::move(eg)};
}

double mse_db(const Vector& x, const Vector& x_hat) {
  if (x.size() != x_hat.size()) throw std::invalid_argument("mse_db: length mismatch");
  const double err = (x - x_hat).squaredNorm();
  if (err == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(err);
}

bool classify_success(double mse) { return mse <= kSuccessThresholdDb; }

TrialRecord run_trial(const ExperimentParams& params, const SolverConfig& cfg) {
  const TrialData trial = simulate_trial(params);
  TrialRecord rec;
  rec.seed = params.seed;
  rec.folding_count = folding_count(trial.epsilon_g);
  try {
    const RecoveryResult res =
        recover(trial.y, trial.matrix, params.prior(), params.channel(), cfg);
    rec.mse_db = mse_db(trial.x, res.x_hat);
    rec.iterations = res.iterations_used;
    rec.converged = res.converged;
  } catch (const SolverDiverged& e) {
    rec.mse_db = std::numeric_limits<double>::infinity();
    rec.iterations = e.iteration();
    rec.converged = false;
  }
  rec.success = classify_success(rec.mse_db);
  return rec;
}

}  // namespace modgamp
