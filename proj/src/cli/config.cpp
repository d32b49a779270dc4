#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "beamfluid/random_fields.hpp"
#include "cli/toml_lite.hpp"

namespace bf::cli {

namespace {

using json = nlohmann::json;

void check_keys(const json& table, const std::string& where, const std::set<std::string>& allowed) {
  if (!table.is_object()) throw ConfigError("'" + where + "' must be a table");
  for (const auto& [k, v] : table.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

template <class T>
void read(const json& table, const char* key, T& out, const std::string& where) {
  if (!table.contains(key)) return;
  const json& v = table.at(key);
  const std::string name = where.empty() ? key : where + "." + key;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      out = v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0)) throw ConfigError("");
      out = v.get<T>();
    } else {
      out = v.get<T>();
    }
  } catch (const std::exception&) {
    throw ConfigError("'" + name + "' has the wrong type or a negative count");
  }
}

ProfileSpec read_profile(const json& v, const std::string& where) {
  ProfileSpec p;
  if (v.is_number()) {
    p.value = v.get<double>();
    return p;
  }
  if (v.is_string()) {
    p.profile = v.get<std::string>();
    if (p.profile != "zero") throw ConfigError("'" + where + "': a bare string profile must be \"zero\"");
    p.profile = "constant";
    return p;
  }
  check_keys(v, where, {"profile", "value", "mean", "amplitude", "phase", "mode", "seed"});
  read(v, "profile", p.profile, where);
  read(v, "value", p.value, where);
  read(v, "mean", p.mean, where);
  read(v, "amplitude", p.amplitude, where);
  read(v, "phase", p.phase, where);
  read(v, "mode", p.mode, where);
  read(v, "seed", p.seed, where);
  if (p.profile == "zero") {
    p.profile = "constant";
    p.value = 0.0;
  }
  static const std::set<std::string> kinds{"constant", "sine", "cosine", "random"};
  if (!kinds.count(p.profile))
    throw ConfigError("'" + where + ".profile' must be one of constant, zero, sine, cosine, random");
  return p;
}

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

ScalarField1D ProfileSpec::sample(const PeriodicGrid1D& g) const {
  if (profile == "constant") return ScalarField1D::constant(g, value);
  if (profile == "random") {
    const LowPassSpec spec{std::min<int>(8, static_cast<int>(g.n / 2) - 1), 2.0};
    ScalarField1D f = random_lowpass_field(g, seed, spec);
    for (double& v : f.values) v = mean + amplitude * v;
    return f;
  }
  const double k = 2.0 * std::numbers::pi * mode / g.L;
  const bool sine = profile == "sine";
  return ScalarField1D::from_function(g, [&](double x) {
    return mean + amplitude * (sine ? std::sin(k * x + phase) : std::cos(k * x + phase));
  });
}

json ProfileSpec::to_json() const {
  json j{{"profile", profile}};
  if (profile == "constant") {
    j["value"] = value;
  } else {
    j["mean"] = mean;
    j["amplitude"] = amplitude;
    if (profile == "random") {
      j["seed"] = seed;
    } else {
      j["mode"] = mode;
      j["phase"] = phase;
    }
  }
  return j;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::SimulateReduced: return "simulate-reduced";
    case Command::SimulateCoupled: return "simulate-coupled";
    case Command::StokesSolve: return "stokes-solve";
    case Command::VerifyInequalities: return "verify-inequalities";
    case Command::LiftCheck: return "lift-check";
    case Command::ConvergenceStudy: return "convergence-study";
  }
  return "?";
}

SimConfig config_from_json(const json& root) {
  SimConfig c;
  check_keys(root, "", {"schema_version", "grid", "time", "beam", "fluid", "initial", "output", "ensemble", "stokes",
                        "study"});
  if (root.contains("schema_version") && root.at("schema_version") != 1)
    throw ConfigError("unsupported schema_version (expected 1)");
  if (root.contains("grid")) {
    const json& g = root.at("grid");
    check_keys(g, "grid", {"L", "nx", "nz"});
    read(g, "L", c.L, "grid");
    read(g, "nx", c.nx, "grid");
    read(g, "nz", c.nz, "grid");
  }
  if (root.contains("time")) {
    const json& t = root.at("time");
    check_keys(t, "time", {"dt", "T", "h_floor", "snapshot_every"});
    read(t, "dt", c.dt, "time");
    read(t, "T", c.T, "time");
    read(t, "h_floor", c.h_floor, "time");
    read(t, "snapshot_every", c.snapshot_every, "time");
  }
  if (root.contains("beam")) {
    const json& b = root.at("beam");
    check_keys(b, "beam", {"rho_s", "alpha", "beta", "gamma"});
    read(b, "rho_s", c.beam.rho_s, "beam");
    read(b, "alpha", c.beam.alpha, "beam");
    read(b, "beta", c.beam.beta, "beam");
    read(b, "gamma", c.beam.gamma, "beam");
  }
  if (root.contains("fluid")) {
    const json& f = root.at("fluid");
    check_keys(f, "fluid", {"mu", "rho_f"});
    read(f, "mu", c.fluid.mu, "fluid");
    read(f, "rho_f", c.fluid.rho_f, "fluid");
  }
  if (root.contains("initial")) {
    const json& i = root.at("initial");
    check_keys(i, "initial", {"h0", "hdot0", "u0"});
    if (i.contains("h0")) c.h0 = read_profile(i.at("h0"), "initial.h0");
    if (i.contains("hdot0")) c.hdot0 = read_profile(i.at("hdot0"), "initial.hdot0");
    read(i, "u0", c.u0, "initial");
  }
  if (root.contains("output")) {
    check_keys(root.at("output"), "output", {"dir"});
    read(root.at("output"), "dir", c.out_dir, "output");
  }
  if (root.contains("ensemble")) {
    const json& e = root.at("ensemble");
    check_keys(e, "ensemble", {"size", "seed", "jobs"});
    read(e, "size", c.ensemble, "ensemble");
    read(e, "seed", c.seed, "ensemble");
    read(e, "jobs", c.jobs, "ensemble");
  }
  if (root.contains("stokes")) {
    const json& s = root.at("stokes");
    check_keys(s, "stokes", {"problem", "amplitude"});
    read(s, "problem", c.stokes_problem, "stokes");
    read(s, "amplitude", c.stokes_amplitude, "stokes");
  }
  if (root.contains("study")) {
    const json& s = root.at("study");
    check_keys(s, "study", {"kind", "levels"});
    read(s, "kind", c.study, "study");
    read(s, "levels", c.levels, "study");
  }
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const bool toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  json j;
  if (toml) {
    j = parse_toml(ss.str());
  } else {
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
  }
  return config_from_json(j);
}

json SimConfig::to_json() const {
  return json{{"schema_version", 1},
              {"grid", {{"L", L}, {"nx", nx}, {"nz", nz}}},
              {"time", {{"dt", dt}, {"T", T}, {"h_floor", h_floor}, {"snapshot_every", snapshot_every}}},
              {"beam", {{"rho_s", beam.rho_s}, {"alpha", beam.alpha}, {"beta", beam.beta}, {"gamma", beam.gamma}}},
              {"fluid", {{"mu", fluid.mu}, {"rho_f", fluid.rho_f}}},
              {"initial", {{"h0", h0.to_json()}, {"hdot0", hdot0.to_json()}, {"u0", u0}}},
              {"output", {{"dir", out_dir}}},
              {"ensemble", {{"size", ensemble}, {"seed", seed}, {"jobs", jobs}}},
              {"stokes", {{"problem", stokes_problem}, {"amplitude", stokes_amplitude}}},
              {"study", {{"kind", study}, {"levels", levels}}}};
}

std::size_t ensemble_size(const SimConfig& cfg, Command cmd) {
  if (cfg.ensemble > 0) return cfg.ensemble;
  return cmd == Command::LiftCheck ? 30 : 1000;
}

void validate(const SimConfig& c, Command cmd) {
  if (!(c.L > 0.0) || !std::isfinite(c.L)) throw ConfigError("grid.L must be > 0");
  if (!power_of_two(c.nx) || c.nx < 8) throw ConfigError("grid.nx must be a power of two >= 8 (FFT grid)");
  if (c.nz < 8) throw ConfigError("grid.nz must be >= 8");
  if (c.jobs == 0) throw ConfigError("jobs must be >= 1");

  const bool dynamic = cmd == Command::SimulateReduced || cmd == Command::SimulateCoupled;
  if (dynamic) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("time.dt must be > 0");
    if (!(c.T >= 0.0) || !std::isfinite(c.T)) throw ConfigError("time.T must be >= 0");
    if (!(c.beam.rho_s > 0.0)) throw ConfigError("beam.rho_s must be > 0");
    if (!(c.beam.alpha > 0.0))
      throw ConfigError("beam.alpha = " + std::to_string(c.beam.alpha) +
                        " violates the hypothesis alpha > 0 (flexural rigidity) of the well-posedness theory");
    if (!(c.beam.gamma > 0.0))
      throw ConfigError("beam.gamma = " + std::to_string(c.beam.gamma) +
                        " violates the hypothesis gamma > 0 (beam viscosity) of the well-posedness theory");
    if (!(c.beam.beta >= 0.0)) throw ConfigError("beam.beta must be >= 0");
    const PeriodicGrid1D g(c.L, c.nx);
    const ScalarField1D h0 = c.h0.sample(g), v0 = c.hdot0.sample(g);
    if (!(h0.min() > 0.0) || !h0.finite())
      throw ConfigError("initial.h0 violates min h0 > 0 (no contact at t = 0); min = " + std::to_string(h0.min()));
    if (std::abs(mean(v0)) > 1e-10 * std::max(1.0, v0.max_abs()))
      throw ConfigError("initial.hdot0 must have zero mean (volume constraint)");
    if (c.h_floor >= h0.min()) throw ConfigError("time.h_floor must be below min h0");
  }
  if (cmd == Command::SimulateCoupled) {
    if (!(c.fluid.mu > 0.0)) throw ConfigError("fluid.mu must be > 0");
    if (!(c.fluid.rho_f > 0.0)) throw ConfigError("fluid.rho_f must be > 0");
    if (c.u0 != "zero" && c.u0 != "stokes") throw ConfigError("initial.u0 must be \"zero\" or \"stokes\"");
    if (c.u0 == "zero" && c.hdot0.sample(PeriodicGrid1D(c.L, c.nx)).max_abs() > 0.0)
      throw ConfigError("initial.u0 = \"zero\" needs hdot0 = 0 (no-slip at the beam); use u0 = \"stokes\"");
    if (c.nx > 256 || c.nz > 129) throw ConfigError("coupled runs are limited to 256 x 129 grids");
  }
  if (cmd == Command::StokesSolve) {
    if (c.stokes_problem != "random" && c.stokes_problem != "poiseuille" && c.stokes_problem != "manufactured")
      throw ConfigError("stokes.problem must be random, poiseuille or manufactured");
    if (!(c.stokes_amplitude >= 0.0 && c.stokes_amplitude < 1.0)) throw ConfigError("stokes.amplitude must lie in [0, 1)");
    if (c.nx > 256 || c.nz > 129) throw ConfigError("Stokes solves are limited to 256 x 129 grids");
  }
  if (cmd == Command::VerifyInequalities || cmd == Command::LiftCheck) {
    if (cmd == Command::LiftCheck && ensemble_size(c, cmd) < 30)
      throw ConfigError("lift-check needs ensemble.size >= 30");
    if (c.nx < 32) throw ConfigError("ensemble checks need grid.nx >= 32");
  }
  if (cmd == Command::ConvergenceStudy) {
    if (c.study != "stokes" && c.study != "reduced" && c.study != "coupled")
      throw ConfigError("study.kind must be stokes, reduced or coupled");
    if (c.levels.size() < 2) throw ConfigError("study.levels needs at least two entries");
    for (std::size_t v : c.levels)
      if (!power_of_two(v) || v < 8 || v > 256) throw ConfigError("study.levels must be powers of two in [8, 256]");
  }
}

}  // namespace bf::cli
