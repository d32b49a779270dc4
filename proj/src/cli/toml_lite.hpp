#pragma once

#include <string>

#include "json.hpp"

namespace bf::cli {

// Reads the TOML subset used by scenario files: [table] and [a.b] headers,
// key = value with strings, numbers, booleans, arrays and inline tables,
// and # comments. Throws ConfigError with the offending line.
nlohmann::json parse_toml(const std::string& text);

}  // namespace bf::cli
