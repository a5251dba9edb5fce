#pragma once

#include <modgamp/harness.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace modgamp::cli {

enum class Surface { kAuto, kSuccess, kMse };

struct PlotOutputs {
  std::vector<std::filesystem::path> data_files;
  std::filesystem::path script;
};

/// Noisy sweeps (finite snr in the metadata) default to the MSE surface,
/// everything else to the success-rate surface.
Surface resolve_surface(const SweepGrid& grid, Surface requested);

/// gnuplot "nonuniform matrix" text: rho across, eps down. Non-finite
/// values are written as NaN.
std::string nonuniform_matrix(const SweepGrid& grid, double (*value)(const CellSummary&));

/// Writes <stem>_<surface>.dat, <stem>_folds.dat and <stem>.gp into
/// out_dir. The script refers to the data files by bare name.
PlotOutputs write_plot_data(const SweepGrid& grid, const std::filesystem::path& out_dir,
                            const std::string& stem, Surface surface);

}  // namespace modgamp::cli
