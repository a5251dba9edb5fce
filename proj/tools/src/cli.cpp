#include <modgamp_cli/cli.hpp>

#include "json_util.hpp"
#include "plot_data.hpp"

#include <modgamp/harness.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace modgamp::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flags shared by the commands that generate trials.
struct TrialFlags {
  int n_dim = 256;
  double rho = 0.5;
  double eps = 0.1;
  double sigma2 = 1.0;
  double snr_db = kInf;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  bool fixed_sparsity = false;
  CLI::Option* seed_opt = nullptr;
};

struct SolverFlags {
  double epsilon_stop = 1e-3;
  int t_max = 0;  // 0: N/2
  double damping = 1.0;
};

void add_model_flags(CLI::App& app, TrialFlags& f, bool with_point) {
  app.add_option("--n-dim", f.n_dim, "Signal length N")->capture_default_str();
  if (with_point) {
    app.add_option("--rho", f.rho, "Measurement ratio n/N, in (0, 1]")->capture_default_str();
    app.add_option("--eps", f.eps, "Nonzero probability of the Bernoulli-Gaussian prior, in (0, 1]")
        ->capture_default_str();
  }
  app.add_option("--sigma2", f.sigma2, "Variance of the nonzero entries")->capture_default_str();
  app.add_option("--snr", f.snr_db, "SNR in dB; 'inf' disables noise (sigma_w^2 = 10^(-SNR/10))")
      ->capture_default_str();
  app.add_option("--lambda", f.lambda, "Folding threshold of the modulo ADC")->capture_default_str();
  f.seed_opt = app.add_option("--seed", f.seed,
                              fmt::format("Master seed [default: ${} or 0]", kSeedEnvVar));
  app.add_flag("--fixed-sparsity", f.fixed_sparsity,
               "Exactly round(eps*N) nonzeros instead of i.i.d. Bernoulli support");
}

void add_solver_flags(CLI::App& app, SolverFlags& f) {
  app.add_option("--epsilon-stop", f.epsilon_stop,
                 "Relative stopping tolerance ||x_t - x_{t-1}|| < e ||x_t||")
      ->capture_default_str();
  app.add_option("--t-max", f.t_max, "Iteration cap [default: N/2]");
  app.add_option("--damping", f.damping, "Damping of the estimate update, in (0, 1]")
      ->capture_default_str();
}

std::uint64_t resolve_seed(const TrialFlags& f) {
  return f.seed_opt->count() > 0 ? f.seed : seed_from_env(0);
}

ExperimentParams to_params(const TrialFlags& f) {
  ExperimentParams p;
  p.n_dim = f.n_dim;
  p.rho = f.rho;
  p.eps = f.eps;
  p.sigma2 = f.sigma2;
  p.snr_db = f.snr_db;
  try {
    p.lambda = FoldingThreshold(f.lambda);
    p.seed = resolve_seed(f);
    p.sparsity = f.fixed_sparsity ? SparsityMode::kFixedCount : SparsityMode::kBernoulli;
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return p;
}

SolverConfig to_solver(const SolverFlags& f, int n_dim) {
  SolverConfig c = SolverConfig::for_signal_length(n_dim);
  c.epsilon_stop = f.epsilon_stop;
  if (f.t_max != 0) c.t_max = f.t_max;
  c.damping = f.damping;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void write_vector_json(const std::filesystem::path& path, const char* key, const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path.string() + ": cannot open for writing");
  f << json{{key, a}}.dump() << "\n";
  if (!f) throw std::runtime_error(path.string() + ": write failed");
}

// --- simulate -------------------------------------------------------------

struct SimulateCmd {
  TrialFlags model;
  std::string out_dir = "trial";

  void attach(CLI::App& app) {
    add_model_flags(app, model, true);
    app.add_option("-o,--out-dir", out_dir, "Directory for x.json, y.json, matrix.bin, meta.json")
        ->capture_default_str();
  }

  int run(std::ostream& out) const {
    const ExperimentParams p = to_params(model);
    const TrialData trial = simulate_trial(p);
    write_trial(TrialFiles{out_dir}, p, trial);
    out << json{{"out_dir", out_dir},
                {"seed", p.seed},
                {"measurements", p.measurements()},
                {"folding_count", folding_count(trial.epsilon_g)}}
               .dump()
        << "\n";
    return kExitOk;
  }
};

// --- recover --------------------------------------------------------------

struct RecoverCmd {
  TrialFlags model;
  SolverFlags solver;
  std::string input_dir;
  std::string x_hat_out;
  CLI::Option* input_opt = nullptr;

  void attach(CLI::App& app) {
    input_opt = app.add_option("-i,--input-dir", input_dir,
                               "Replay a trial written by 'simulate' (model flags are then ignored)");
    add_model_flags(app, model, true);
    add_solver_flags(app, solver);
    app.add_option("--x-hat-out", x_hat_out, "Also write the estimate as JSON");
  }

  int run(std::ostream& out) const {
    Vector x, y;
    SensingMatrix a(Matrix::Zero(1, 1));
    ExperimentParams p;
    std::size_t folds = 0;
    if (input_opt->count() > 0) {
      LoadedTrial t = read_trial(TrialFiles{input_dir});
      p = t.params;
      x = std::move(t.x);
      y = std::move(t.y);
      a = SensingMatrix(std::move(t.a));
      folds = folding_count(SimpleFunction{t.epsilon_g, p.lambda});
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!(y[i] >= -p.lambda.value() && y[i] < p.lambda.value())) {
          throw std::runtime_error(fmt::format("{}: y[{}] = {} lies outside [-lambda, lambda)",
                                               TrialFiles{input_dir}.y().string(), i, y[i]));
        }
      }
    } else {
      p = to_params(model);
      TrialData t = simulate_trial(p);
      x = std::move(t.x);
      y = std::move(t.y);
      a = std::move(t.matrix);
      folds = folding_count(t.epsilon_g);
    }
    const SolverConfig cfg = to_solver(solver, p.n_dim);

    double mse = kInf;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    Vector x_hat;
    try {
      const RecoveryResult r = recover(y, a, p.prior(), p.channel(), cfg);
      x_hat = r.x_hat;
      mse = mse_db(x, r.x_hat);
      iterations = r.iterations_used;
      converged = r.converged;
    } catch (const SolverDiverged& e) {
      diverged = true;
      iterations = e.iteration();
    }
    const bool success = classify_success(mse);
    if (!x_hat_out.empty() && x_hat.size() > 0) write_vector_json(x_hat_out, "x_hat", x_hat);

    json report = {{"mse_db", json_number(mse)},
                   {"success", success},
                   {"iterations", iterations},
                   {"folding_count", folds},
                   {"converged", converged}};
    if (diverged) report["diverged"] = true;
    out << report.dump() << "\n";
    return success ? kExitOk : kExitRecoveryFailed;
  }
};

// --- sweep ----------------------------------------------------------------

struct SweepCmd {
  TrialFlags model;
  SolverFlags solver;
  int trials = 100;
  std::vector<double> rho_grid = default_rho_grid();
  std::vector<double> eps_grid = default_eps_grid();
  int jobs = 1;
  std::string csv_out = "grid.csv";
  std::string json_out = "grid.json";

  void attach(CLI::App& app) {
    app.add_option("--trials", trials, "Monte-Carlo trials per (rho, eps) cell")
        ->capture_default_str();
    app.add_option("--rho-grid", rho_grid, "Comma-separated increasing rho values")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--eps-grid", eps_grid, "Comma-separated increasing eps values")
        ->delimiter(',')
        ->capture_default_str();
    add_model_flags(app, model, false);
    add_solver_flags(app, solver);
    app.add_option("-j,--jobs", jobs, "Worker threads (results do not depend on this)")
        ->capture_default_str();
    app.add_option("--csv", csv_out, "CSV output path")->capture_default_str();
    app.add_option("--json", json_out, "JSON output path with metadata; empty to skip")
        ->capture_default_str();
  }

  int run(std::ostream& out) const {
    SweepSpec spec;
    spec.rho_grid = rho_grid;
    spec.eps_grid = eps_grid;
    spec.trials_per_cell = trials;
    TrialFlags m = model;
    m.rho = rho_grid.empty() ? 0.5 : rho_grid.front();
    m.eps = eps_grid.empty() ? 0.1 : eps_grid.front();
    spec.base = to_params(m);
    spec.master_seed = spec.base.seed;
    spec.solver = to_solver(solver, spec.base.n_dim);
    spec.parallelism = jobs;
    try {
      spec.validate();
      for (const double r : rho_grid) {
        m.rho = r;
        (void)to_params(m);
      }
      for (const double e : eps_grid) {
        m.eps = e;
        (void)to_params(m);
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const SweepGrid grid = run_sweep(spec);
    export_grid(grid, csv_out, GridFormat::kCsv);
    if (!json_out.empty()) export_grid(grid, json_out, GridFormat::kJson);
    out << json{{"csv", csv_out},
                {"json", json_out},
                {"cells", grid.cells.size()},
                {"master_seed", spec.master_seed}}
               .dump()
        << "\n";
    return kExitOk;
  }
};

// --- plot-data ------------------------------------------------------------

struct PlotDataCmd {
  std::vector<std::string> grids;
  std::string out_dir = ".";
  Surface surface = Surface::kAuto;

  void attach(CLI::App& app) {
    app.add_option("grids", grids, "Grid files written by 'sweep' (CSV or JSON)")->required();
    app.add_option("-o,--out-dir", out_dir, "Directory for the .dat and .gp files")
        ->capture_default_str();
    const std::map<std::string, Surface> names = {
        {"auto", Surface::kAuto}, {"success", Surface::kSuccess}, {"mse", Surface::kMse}};
    app.add_option("--surface", surface,
                   "Main surface: success, mse, or auto (mse when the grid records a finite SNR)")
        ->transform(CLI::CheckedTransformer(names, CLI::ignore_case))
        ->default_str("auto");
  }

  int run(std::ostream& out) const {
    json written = json::array();
    for (const std::string& g : grids) {
      SweepGrid grid;
      try {
        grid = import_grid(g);
      } catch (const GridParseError& e) {
        throw std::runtime_error(fmt::format("schema error: {}", e.what()));
      }
      const std::string stem = std::filesystem::path(g).stem().string();
      const PlotOutputs o = write_plot_data(grid, out_dir, stem, surface);
      json files = json::array();
      for (const auto& f : o.data_files) files.push_back(f.string());
      written.push_back({{"grid", g}, {"script", o.script.string()}, {"data", files}});
    }
    out << written.dump() << "\n";
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery from modulo-ADC compressed measurements with GAMP", "modgamp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "modgamp 0.1.0");

  SimulateCmd simulate;
  RecoverCmd recover_cmd;
  SweepCmd sweep;
  PlotDataCmd plot;
  CLI::App* sim_app = app.add_subcommand("simulate", "Draw one trial and write its files");
  CLI::App* rec_app = app.add_subcommand(
      "recover", "Run GAMP on one trial; exit 0 if recovered (MSE <= -30 dB), 2 if not, 1 on error");
  CLI::App* sweep_app = app.add_subcommand("sweep", "Monte-Carlo sweep over a (rho, eps) grid");
  CLI::App* plot_app = app.add_subcommand("plot-data", "Turn grid files into gnuplot input");
  simulate.attach(*sim_app);
  recover_cmd.attach(*rec_app);
  sweep.attach(*sweep_app);
  plot.attach(*plot_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (sim_app->parsed()) return simulate.run(out);
    if (rec_app->parsed()) return recover_cmd.run(out);
    if (sweep_app->parsed()) return sweep.run(out);
    if (plot_app->parsed()) return plot.run(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace modgamp::cli
