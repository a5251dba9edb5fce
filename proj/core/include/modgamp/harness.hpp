#pragma once

// Monte-Carlo sweeps over the (rho, eps) plane and their on-disk form.

#include <modgamp/gamp.hpp>
#include <modgamp/simulator.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modgamp {

struct SweepSpec {
  std::vector<double> rho_grid;
  std::vector<double> eps_grid;
  int trials_per_cell = 100;
  /// rho, eps and seed are overwritten per trial.
  ExperimentParams base;
  SolverConfig solver;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
  bool keep_trials = false;

  void validate() const;
};

struct CellSummary {
  double rho = 0.0;
  double eps = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  /// Diverged trials enter as +inf; see median_mse_db for a robust figure.
  double mean_mse_db = 0.0;
  double median_mse_db = 0.0;
  double mean_folding_count = 0.0;
  double mean_iterations = 0.0;
  std::vector<TrialRecord> records;  // empty unless keep_trials
};

/// Sweep settings carried alongside the results (absent for grids read
/// back from CSV).
struct SweepMetadata {
  int n_dim = 256;
  double sigma2 = 1.0;
  double snr_db = std::numeric_limits<double>::infinity();
  double lambda = 1.0;
  std::uint64_t master_seed = 0;
  int trials_per_cell = 0;
  double epsilon_stop = 1e-3;
  int t_max = 128;
  bool fixed_sparsity = false;
};

struct SweepGrid {
  std::vector<double> rho_grid;
  std::vector<double> eps_grid;
  /// Row-major in (rho, eps): cells[i * eps_grid.size() + j].
  std::vector<CellSummary> cells;
  std::optional<SweepMetadata> metadata;

  const CellSummary& at(std::size_t rho_index, std::size_t eps_index) const {
    return cells.at(rho_index * eps_grid.size() + eps_index);
  }
};

/// Deterministic in spec: the result does not depend on parallelism.
SweepGrid run_sweep(const SweepSpec& spec);

/// Seed of trial `trial` in cell (rho_index, eps_index).
std::uint64_t cell_trial_seed(std::uint64_t master_seed, std::size_t rho_index,
                              std::size_t eps_index, std::size_t trial);

/// 10 values linear over [0.1, 1].
std::vector<double> default_rho_grid();
/// 8 values geometric over [0.0156, 0.25].
std::vector<double> default_eps_grid();

enum class GridFormat { kCsv, kJson };

/// CSV header, in order.
inline constexpr const char* kGridCsvHeader =
    "rho,eps,trials,success_rate,mean_mse_db,mean_folding_count,mean_iterations";

class GridIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridParseError : public GridIoError {
 public:
  GridParseError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::string format_grid(const SweepGrid& grid, GridFormat format);
void export_grid(const SweepGrid& grid, const std::filesystem::path& path, GridFormat format);

/// Parses either format (JSON if the first non-blank character is '{').
SweepGrid parse_grid(const std::string& text, const std::string& origin = "<memory>");
SweepGrid import_grid(const std::filesystem::path& path);

}  // namespace modgamp
