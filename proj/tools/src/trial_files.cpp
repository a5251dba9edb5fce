#include <modgamp_cli/cli.hpp>

#include "json_util.hpp"

#include <fmt/format.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace modgamp::cli {

namespace {

constexpr std::array<char, 8> kMatrixMagic = {'M', 'G', 'A', 'M', 'P', 'M', 'A', 'T'};

static_assert(std::endian::native == std::endian::little,
              "matrix.bin I/O assumes a little-endian host");

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(fmt::format("{}: {}", path.string(), what));
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector json_vector(const json& a, const std::filesystem::path& path, const char* key) {
  if (!a.is_array()) fail(path, fmt::format("'{}' must be an array of numbers", key));
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) fail(path, fmt::format("'{}'[{}] is not a number", key, i));
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open for writing");
  f << text;
  if (!f) fail(path, "write failed");
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& a) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open for writing");
  const std::uint64_t rows = static_cast<std::uint64_t>(a.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(a.cols());
  f.write(kMatrixMagic.data(), kMatrixMagic.size());
  f.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  f.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = a;
  f.write(reinterpret_cast<const char*>(rm.data()),
          static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!f) fail(path, "write failed");
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open");
  std::array<char, 8> magic{};
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  f.read(magic.data(), magic.size());
  if (!f || magic != kMatrixMagic) fail(path, "not a matrix file (bad magic)");
  f.read(reinterpret_cast<char*>(&rows), sizeof rows);
  f.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!f) fail(path, "truncated header");
  if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
    fail(path, fmt::format("implausible dimensions {}x{}", rows, cols));
  }
  const std::uint64_t count = rows * cols;
  const auto header = static_cast<std::uint64_t>(f.tellg());
  f.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(f.tellg());
  if (size != header + count * sizeof(double)) {
    fail(path, fmt::format("expected {} payload bytes for {}x{}, found {}", count * sizeof(double),
                           rows, cols, size - header));
  }
  f.seekg(static_cast<std::streamoff>(header));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  f.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!f) fail(path, "read failed");
  if (!rm.allFinite()) fail(path, "non-finite matrix entry");
  return rm;
}

void write_trial(const TrialFiles& files, const ExperimentParams& params, const TrialData& trial) {
  std::filesystem::create_directories(files.dir);
  write_text(files.x(), json{{"x", vector_json(trial.x)}}.dump() + "\n");
  write_text(files.y(), json{{"y", vector_json(trial.y)},
                             {"epsilon_g", vector_json(trial.epsilon_g.offsets)}}
                                .dump() +
                            "\n");
  write_matrix(files.matrix(), trial.matrix.a());
  const json meta = {
      {"n_dim", params.n_dim},
      {"measurements", params.measurements()},
      {"rho", params.rho},
      {"eps", params.eps},
      {"sigma2", params.sigma2},
      {"snr_db", json_number(params.snr_db)},
      {"sigma_w2", params.noise_variance()},
      {"lambda", params.lambda.value()},
      {"seed", params.seed},
      {"sparsity", params.sparsity == SparsityMode::kFixedCount ? "fixed" : "bernoulli"},
      {"folding_count", folding_count(trial.epsilon_g)},
  };
  write_text(files.meta(), meta.dump(2) + "\n");
}

LoadedTrial read_trial(const TrialFiles& files) {
  LoadedTrial t;
  const json meta = read_json(files.meta());
  try {
    t.params.n_dim = meta.at("n_dim").get<int>();
    t.params.rho = meta.at("rho").get<double>();
    t.params.eps = meta.at("eps").get<double>();
    t.params.sigma2 = meta.at("sigma2").get<double>();
    t.params.snr_db = json_to_double(meta.at("snr_db"));
    t.params.lambda = FoldingThreshold(meta.at("lambda").get<double>());
    t.params.seed = meta.at("seed").get<std::uint64_t>();
    const std::string sparsity = meta.value("sparsity", "bernoulli");
    if (sparsity != "bernoulli" && sparsity != "fixed") {
      throw std::invalid_argument("unknown sparsity '" + sparsity + "'");
    }
    t.params.sparsity = sparsity == "fixed" ? SparsityMode::kFixedCount : SparsityMode::kBernoulli;
    t.params.validate();
  } catch (const std::exception& e) {
    fail(files.meta(), e.what());
  }

  const json xj = read_json(files.x());
  if (!xj.contains("x")) fail(files.x(), "missing 'x'");
  t.x = json_vector(xj.at("x"), files.x(), "x");
  const json yj = read_json(files.y());
  if (!yj.contains("y")) fail(files.y(), "missing 'y'");
  t.y = json_vector(yj.at("y"), files.y(), "y");
  t.epsilon_g = yj.contains("epsilon_g") ? json_vector(yj.at("epsilon_g"), files.y(), "epsilon_g")
                                         : Vector::Zero(t.y.size());
  t.a = read_matrix(files.matrix());

  if (t.a.cols() != t.x.size() || t.x.size() != t.params.n_dim) {
    fail(files.dir, fmt::format("dimension mismatch: matrix has {} columns, x has {} entries, "
                                "n_dim is {}",
                                t.a.cols(), t.x.size(), t.params.n_dim));
  }
  if (t.a.rows() != t.y.size() || t.epsilon_g.size() != t.y.size()) {
    fail(files.dir, fmt::format("dimension mismatch: matrix has {} rows, y has {} entries, "
                                "epsilon_g has {}",
                                t.a.rows(), t.y.size(), t.epsilon_g.size()));
  }
  return t;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* v = std::getenv(kSeedEnvVar);
  if (v == nullptr || *v == '\0') return fallback;
  std::size_t used = 0;
  unsigned long long s = 0;
  try {
    s = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::strlen(v) || v[0] == '-') {
    throw std::invalid_argument(fmt::format("{}='{}' is not an unsigned integer", kSeedEnvVar, v));
  }
  return s;
}

}  // namespace modgamp::cli
