#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cli/config.hpp"
#include "json.hpp"

namespace bf::cli {

inline constexpr int kSchemaVersion = 1;

// Flag values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> snapshot_every;
  std::optional<std::size_t> ensemble;
};

void apply_overrides(SimConfig& cfg, const Overrides& o);

// Runs a validated configuration and writes its outputs under cfg.out_dir.
// Returns the summary document.
nlohmann::json run_command(Command cmd, const SimConfig& cfg);

// Full command line: parse, load, validate, run. Exit codes: 0 success,
// 2 invalid input, 3 contact or solver failure, 1 internal error.
int run(int argc, char** argv);

}  // namespace bf::cli
