#pragma once

// Command-line front end. run_cli is the whole program minus process
// plumbing so tests can drive it in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <modgamp/simulator.hpp>

namespace modgamp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRecoveryFailed = 2;

inline constexpr const char* kSeedEnvVar = "MODULO_GAMP_SEED";

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Trial artifacts written by `simulate` and read by `recover`.

struct TrialFiles {
  std::filesystem::path dir;
  std::filesystem::path x() const { return dir / "x.json"; }
  std::filesystem::path y() const { return dir / "y.json"; }
  std::filesystem::path matrix() const { return dir / "matrix.bin"; }
  std::filesystem::path meta() const { return dir / "meta.json"; }
};

/// matrix.bin: "MGAMPMAT", uint64 rows, uint64 cols, row-major
/// little-endian doubles.
void write_matrix(const std::filesystem::path& path, const Matrix& a);
Matrix read_matrix(const std::filesystem::path& path);

void write_trial(const TrialFiles& files, const ExperimentParams& params, const TrialData& trial);

struct LoadedTrial {
  ExperimentParams params;
  Vector x;
  Vector y;
  Vector epsilon_g;
  Matrix a;
};

/// Throws std::runtime_error with the offending path on any malformed or
/// inconsistent file.
LoadedTrial read_trial(const TrialFiles& files);

/// Seed from the environment fallback, or `fallback` if unset.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace modgamp::cli
