#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beamfluid/beam.hpp"
#include "beamfluid/core_fields.hpp"
#include "beamfluid/coupled.hpp"
#include "beamfluid/errors.hpp"
#include "json.hpp"

namespace bf::cli {

// Unreadable or invalid configuration; the CLI maps it to exit code 2.
struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// Named analytic initial profile:
//   constant: value
//   sine / cosine: mean + amplitude * sin|cos(2 pi mode x / L + phase)
//   random: mean + amplitude * (unit low-pass field with the given seed)
struct ProfileSpec {
  std::string profile = "constant";
  double value = 0.0;
  double mean = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  int mode = 1;
  std::uint64_t seed = 0;

  ScalarField1D sample(const PeriodicGrid1D& grid) const;
  nlohmann::json to_json() const;
};

enum class Command { SimulateReduced, SimulateCoupled, StokesSolve, VerifyInequalities, LiftCheck, ConvergenceStudy };

const char* command_name(Command c);

struct SimConfig {
  double L = 1.0;
  std::size_t nx = 128;
  std::size_t nz = 33;
  double dt = 1e-4;
  double T = 0.1;
  double h_floor = -1.0;  // < 0: default floor of the initial height
  std::size_t snapshot_every = 0;
  BeamParams beam;
  FluidParams fluid;
  ProfileSpec h0{"constant", 1.0};
  ProfileSpec hdot0{"constant", 0.0};
  std::string u0 = "zero";
  std::string out_dir = "out";
  std::size_t ensemble = 0;  // 0: command default (1000 inequality fields, 30 lifts)
  std::uint64_t seed = 7;
  std::size_t jobs = 1;
  // stokes-solve
  std::string stokes_problem = "random";
  double stokes_amplitude = 0.3;
  // convergence-study
  std::string study = "stokes";
  std::vector<std::size_t> levels{16, 32, 64};

  nlohmann::json to_json() const;
};

std::size_t ensemble_size(const SimConfig& cfg, Command cmd);

// TOML for *.toml, JSON otherwise. Unknown keys are rejected.
SimConfig load_config(const std::string& path);
SimConfig config_from_json(const nlohmann::json& j);

// Checks the preconditions of the modules the command will call; the message
// names the violated hypothesis.
void validate(const SimConfig& cfg, Command cmd);

}  // namespace bf::cli
