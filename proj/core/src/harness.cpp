#include <modgamp/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace modgamp {

namespace {

void require_increasing(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " grid values must lie in (0, 1]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

CellSummary summarize(double rho, double eps, std::vector<TrialRecord> records, bool keep) {
  CellSummary c;
  c.rho = rho;
  c.eps = eps;
  c.trials = static_cast<int>(records.size());
  double sum_mse = 0.0;
  double sum_folds = 0.0;
  double sum_iters = 0.0;
  std::vector<double> mses;
  mses.reserve(records.size());
  for (const TrialRecord& r : records) {
    c.successes += r.success ? 1 : 0;
    sum_mse += r.mse_db;
    sum_folds += static_cast<double>(r.folding_count);
    sum_iters += r.iterations;
    mses.push_back(r.mse_db);
  }
  const double t = static_cast<double>(c.trials);
  c.success_rate = static_cast<double>(c.successes) / t;
  c.mean_mse_db = sum_mse / t;
  c.median_mse_db = median(std::move(mses));
  c.mean_folding_count = sum_folds / t;
  c.mean_iterations = sum_iters / t;
  if (keep) c.records = std::move(records);
  return c;
}

}  // namespace

void SweepSpec::validate() const {
  require_increasing(rho_grid, "rho");
  require_increasing(eps_grid, "eps");
  if (trials_per_cell < 1) throw std::invalid_argument("trials_per_cell must be positive");
  if (parallelism < 1) throw std::invalid_argument("parallelism must be positive");
  solver.validate();
}

std::uint64_t cell_trial_seed(std::uint64_t master_seed, std::size_t rho_index,
                              std::size_t eps_index, std::size_t trial) {
  return derive_seed(master_seed, {rho_index, eps_index, trial});
}

std::vector<double> default_rho_grid() {
  std::vector<double> g(10);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 0.1 + 0.1 * static_cast<double>(i);
  g.back() = 1.0;
  return g;
}

std::vector<double> default_eps_grid() {
  constexpr double lo = 0.0156;
  constexpr double hi = 0.25;
  std::vector<double> g(8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(g.size() - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

SweepGrid run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n_rho = spec.rho_grid.size();
  const std::size_t n_eps = spec.eps_grid.size();
  const auto trials = static_cast<std::size_t>(spec.trials_per_cell);
  const std::size_t total = n_rho * n_eps * trials;

  // Every (cell, trial) writes only its own slot; aggregation happens after
  // all workers join, in index order.
  std::vector<TrialRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const std::size_t cell = idx / trials;
      const std::size_t trial = idx % trials;
      const std::size_t ri = cell / n_eps;
      const std::size_t ei = cell % n_eps;
      ExperimentParams p = spec.base;
      p.rho = spec.rho_grid[ri];
      p.eps = spec.eps_grid[ei];
      p.seed = cell_trial_seed(spec.master_seed, ri, ei, trial);
      try {
        records[idx] = run_trial(p, spec.solver);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };

  const auto workers = static_cast<std::size_t>(spec.parallelism);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  SweepGrid grid;
  grid.rho_grid = spec.rho_grid;
  grid.eps_grid = spec.eps_grid;
  grid.cells.reserve(n_rho * n_eps);
  for (std::size_t cell = 0; cell < n_rho * n_eps; ++cell) {
    const auto first = records.begin() + static_cast<std::ptrdiff_t>(cell * trials);
    grid.cells.push_back(summarize(spec.rho_grid[cell / n_eps], spec.eps_grid[cell % n_eps],
                                   std::vector<TrialRecord>(first, first + static_cast<std::ptrdiff_t>(trials)),
                                   spec.keep_trials));
  }

  SweepMetadata meta;
  meta.n_dim = spec.base.n_dim;
  meta.sigma2 = spec.base.sigma2;
  meta.snr_db = spec.base.snr_db;
  meta.lambda = spec.base.lambda.value();
  meta.master_seed = spec.master_seed;
  meta.trials_per_cell = spec.trials_per_cell;
  meta.epsilon_stop = spec.solver.epsilon_stop;
  meta.t_max = spec.solver.t_max;
  meta.fixed_sparsity = spec.base.sparsity == SparsityMode::kFixedCount;
  grid.metadata = meta;
  return grid;
}

}  // namespace modgamp
