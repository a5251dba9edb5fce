#include "plot_data.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace modgamp::cli {

namespace {

std::string cell_text(double v) { return std::isfinite(v) ? fmt::format("{}", v) : "NaN"; }

double success_of(const CellSummary& c) { return c.success_rate; }
double mse_of(const CellSummary& c) { return c.mean_mse_db; }
double folds_of(const CellSummary& c) { return c.mean_folding_count; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path.string() + ": cannot open for writing");
  f << text;
  if (!f) throw std::runtime_error(path.string() + ": write failed");
}

std::string plot_block(const std::string& data, const std::string& png, const std::string& title,
                       const std::string& cbrange, bool degenerate) {
  std::string s;
  s += fmt::format("set output \"{}\"\n", png);
  s += fmt::format("set title \"{}\"\n", title);
  s += cbrange.empty() ? "set autoscale cb\n" : fmt::format("set cbrange [{}]\n", cbrange);
  if (degenerate) {
    s += fmt::format("splot \"{}\" nonuniform matrix with points pointtype 5 pointsize 4 palette notitle\n",
                     data);
  } else {
    s += fmt::format("splot \"{}\" nonuniform matrix with pm3d notitle\n", data);
  }
  return s;
}

}  // namespace

Surface resolve_surface(const SweepGrid& grid, Surface requested) {
  if (requested != Surface::kAuto) return requested;
  if (grid.metadata && std::isfinite(grid.metadata->snr_db)) return Surface::kMse;
  return Surface::kSuccess;
}

std::string nonuniform_matrix(const SweepGrid& grid, double (*value)(const CellSummary&)) {
  std::string s = fmt::format("{}", grid.rho_grid.size());
  for (const double r : grid.rho_grid) s += " " + cell_text(r);
  s += "\n";
  for (std::size_t j = 0; j < grid.eps_grid.size(); ++j) {
    s += cell_text(grid.eps_grid[j]);
    for (std::size_t i = 0; i < grid.rho_grid.size(); ++i) s += " " + cell_text(value(grid.at(i, j)));
    s += "\n";
  }
  return s;
}

PlotOutputs write_plot_data(const SweepGrid& grid, const std::filesystem::path& out_dir,
                            const std::string& stem, Surface surface) {
  if (grid.cells.empty() || grid.cells.size() != grid.rho_grid.size() * grid.eps_grid.size()) {
    throw std::invalid_argument("grid is empty or incomplete");
  }
  for (const char ch : stem) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) {
      throw std::invalid_argument(fmt::format("output stem '{}' must be [A-Za-z0-9_.-]", stem));
    }
  }
  std::filesystem::create_directories(out_dir);

  const Surface main = resolve_surface(grid, surface);
  const bool mse = main == Surface::kMse;
  const std::string main_name = stem + (mse ? "_mse" : "_success");
  const std::string folds_name = stem + "_folds";

  PlotOutputs out;
  out.data_files.push_back(out_dir / (main_name + ".dat"));
  out.data_files.push_back(out_dir / (folds_name + ".dat"));
  out.script = out_dir / (stem + ".gp");
  write_file(out.data_files[0], nonuniform_matrix(grid, mse ? mse_of : success_of));
  write_file(out.data_files[1], nonuniform_matrix(grid, folds_of));

  const bool degenerate = grid.rho_grid.size() < 2 || grid.eps_grid.size() < 2;
  std::string gp;
  gp += "# Run from this directory: gnuplot " + stem + ".gp\n";
  gp += "if (strstrt(GPVAL_TERMINALS, \"pngcairo\") > 0) {\n";
  gp += "  set terminal pngcairo size 900,700\n";
  gp += "} else {\n";
  gp += "  set terminal png size 900,700\n";
  gp += "}\n";
  gp += "set view map\n";
  gp += "set datafile missing \"NaN\"\n";
  gp += "set xlabel \"measurement ratio rho\"\n";
  gp += "set ylabel \"nonzero probability eps\"\n";
  gp += "set logscale y 2\n";
  gp += "set palette rgbformulae 33,13,10\n";
  gp += plot_block(main_name + ".dat", main_name + ".png",
                   mse ? "Average MSE (dB)" : "Average success rate", mse ? "" : "0:1", degenerate);
  gp += plot_block(folds_name + ".dat", folds_name + ".png", "Average number of folds", "",
                   degenerate);
  gp += "unset output\n";
  write_file(out.script, gp);
  return out;
}

}  // namespace modgamp::cli
