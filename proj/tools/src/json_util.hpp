#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

namespace modgamp::cli {

using nlohmann::json;

/// Finite values as numbers, the rest as "inf" / "-inf" / "nan".
json json_number(double v);
double json_to_double(const json& j);

/// Throws std::runtime_error naming the path and the parse position.
json read_json(const std::filesystem::path& path);

}  // namespace modgamp::cli
