#include <modgamp/harness.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace modgamp {

namespace {

using nlohmann::json;

constexpr const char* kJsonFormatTag = "modgamp-sweep";
constexpr int kJsonVersion = 1;

// Shortest representation that reads back to the same double.
std::string number(double v) { return fmt::format("{}", v); }

// JSON has no literal for non-finite values; store them as strings.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  return number(v);
}

double parse_double(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

double json_double(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) return parse_double(v.get<std::string>());
  if (!v.is_number()) throw std::invalid_argument(std::string("field '") + key + "' is not numeric");
  return v.get<double>();
}

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Rebuilds the axis grids from the cell list and checks it is a full,
// (rho, eps)-ordered product.
void finish_grid(SweepGrid& grid, const std::string& origin) {
  std::vector<double> rhos, epss;
  for (const CellSummary& c : grid.cells) {
    rhos.push_back(c.rho);
    epss.push_back(c.eps);
  }
  grid.rho_grid = unique_sorted(std::move(rhos));
  grid.eps_grid = unique_sorted(std::move(epss));
  if (grid.cells.size() != grid.rho_grid.size() * grid.eps_grid.size()) {
    throw GridParseError(origin, 0, "cells do not form a complete rho x eps grid");
  }
  for (std::size_t i = 0; i < grid.rho_grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.eps_grid.size(); ++j) {
      const CellSummary& c = grid.at(i, j);
      if (c.rho != grid.rho_grid[i] || c.eps != grid.eps_grid[j]) {
        throw GridParseError(origin, 0, "cells are not sorted by (rho, eps)");
      }
    }
  }
}

std::string format_csv(const SweepGrid& grid) {
  std::string out = kGridCsvHeader;
  out += '\n';
  for (const CellSummary& c : grid.cells) {
    out += fmt::format("{},{},{},{},{},{},{}\n", number(c.rho), number(c.eps), c.trials,
                       number(c.success_rate), number(c.mean_mse_db),
                       number(c.mean_folding_count), number(c.mean_iterations));
  }
  return out;
}

std::string format_json(const SweepGrid& grid) {
  json doc;
  doc["format"] = kJsonFormatTag;
  doc["version"] = kJsonVersion;
  if (grid.metadata) {
    const SweepMetadata& m = *grid.metadata;
    doc["master_seed"] = m.master_seed;
    doc["spec"] = {
        {"n_dim", m.n_dim},
        {"sigma2", json_number(m.sigma2)},
        {"snr_db", json_number(m.snr_db)},
        {"lambda", json_number(m.lambda)},
        {"trials_per_cell", m.trials_per_cell},
        {"epsilon_stop", json_number(m.epsilon_stop)},
        {"t_max", m.t_max},
        {"sparsity", m.fixed_sparsity ? "fixed" : "bernoulli"},
        {"rho_grid", grid.rho_grid},
        {"eps_grid", grid.eps_grid},
    };
  }
  json cells = json::array();
  for (const CellSummary& c : grid.cells) {
    cells.push_back({
        {"rho", c.rho},
        {"eps", c.eps},
        {"trials", c.trials},
        {"success_rate", json_number(c.success_rate)},
        {"mean_mse_db", json_number(c.mean_mse_db)},
        {"median_mse_db", json_number(c.median_mse_db)},
        {"mean_folding_count", json_number(c.mean_folding_count)},
        {"mean_iterations", json_number(c.mean_iterations)},
    });
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

SweepGrid parse_csv(const std::string& text, const std::string& origin) {
  SweepGrid grid;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kGridCsvHeader) {
        throw GridParseError(origin, line_no, "unexpected CSV header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_commas(line);
    if (f.size() != 7) {
      throw GridParseError(origin, line_no,
                           fmt::format("expected 7 fields, found {}", f.size()));
    }
    try {
      CellSummary c;
      c.rho = parse_double(f[0]);
      c.eps = parse_double(f[1]);
      const double trials = parse_double(f[2]);
      if (trials < 1 || trials != std::floor(trials)) throw std::invalid_argument("bad trial count");
      c.trials = static_cast<int>(trials);
      c.success_rate = parse_double(f[3]);
      c.mean_mse_db = parse_double(f[4]);
      c.mean_folding_count = parse_double(f[5]);
      c.mean_iterations = parse_double(f[6]);
      c.successes = static_cast<int>(std::lround(c.success_rate * c.trials));
      c.median_mse_db = std::numeric_limits<double>::quiet_NaN();
      grid.cells.push_back(c);
    } catch (const std::invalid_argument& e) {
      throw GridParseError(origin, line_no, e.what());
    }
  }
  if (!header_seen) throw GridParseError(origin, line_no, "empty grid file");
  if (grid.cells.empty()) throw GridParseError(origin, line_no, "no data rows");
  finish_grid(grid, origin);
  return grid;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

SweepGrid parse_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GridParseError(origin, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  SweepGrid grid;
  try {
    if (doc.value("format", std::string{}) != kJsonFormatTag) {
      throw std::invalid_argument("missing or wrong 'format' tag");
    }
    if (doc.contains("spec")) {
      const json& s = doc.at("spec");
      SweepMetadata m;
      m.master_seed = doc.at("master_seed").get<std::uint64_t>();
      m.n_dim = s.at("n_dim").get<int>();
      m.sigma2 = json_double(s, "sigma2");
      m.snr_db = json_double(s, "snr_db");
      m.lambda = json_double(s, "lambda");
      m.trials_per_cell = s.at("trials_per_cell").get<int>();
      m.epsilon_stop = json_double(s, "epsilon_stop");
      m.t_max = s.at("t_max").get<int>();
      m.fixed_sparsity = s.at("sparsity").get<std::string>() == "fixed";
      grid.metadata = m;
    }
    for (const json& j : doc.at("cells")) {
      CellSummary c;
      c.rho = json_double(j, "rho");
      c.eps = json_double(j, "eps");
      c.trials = j.at("trials").get<int>();
      c.success_rate = json_double(j, "success_rate");
      c.mean_mse_db = json_double(j, "mean_mse_db");
      c.median_mse_db = j.contains("median_mse_db") ? json_double(j, "median_mse_db")
                                                    : std::numeric_limits<double>::quiet_NaN();
      c.mean_folding_count = json_double(j, "mean_folding_count");
      c.mean_iterations = json_double(j, "mean_iterations");
      c.successes = static_cast<int>(std::lround(c.success_rate * c.trials));
      grid.cells.push_back(c);
    }
  } catch (const json::exception& e) {
    throw GridParseError(origin, 0, e.what());
  } catch (const std::invalid_argument& e) {
    throw GridParseError(origin, 0, e.what());
  }
  if (grid.cells.empty()) throw GridParseError(origin, 0, "no cells");
  finish_grid(grid, origin);
  return grid;
}

}  // namespace

GridParseError::GridParseError(const std::string& path, std::size_t line, const std::string& what)
    : GridIoError(line > 0 ? fmt::format("{}:{}: {}", path, line, what)
                           : fmt::format("{}: {}", path, what)),
      line_(line) {}

std::string format_grid(const SweepGrid& grid, GridFormat format) {
  return format == GridFormat::kCsv ? format_csv(grid) : format_json(grid);
}

void export_grid(const SweepGrid& grid, const std::filesystem::path& path, GridFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GridIoError("cannot open '" + path.string() + "' for writing");
  out << format_grid(grid, format);
  out.flush();
  if (!out) throw GridIoError("failed writing '" + path.string() + "'");
}

SweepGrid parse_grid(const std::string& text, const std::string& origin) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text, origin);
  return parse_csv(text, origin);
}

SweepGrid import_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GridIoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str(), path.string());
}

}  // namespace modgamp
