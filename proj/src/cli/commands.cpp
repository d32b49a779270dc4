#include "cli/commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "beamfluid/analysis.hpp"
#include "beamfluid/coupled.hpp"
#include "beamfluid/ensembles.hpp"
#include "beamfluid/reduced_model.hpp"
#include "beamfluid/stokes.hpp"
#include "cli/output.hpp"

namespace bf::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json check(const std::string& name, double value, double limit, bool pass) {
  return {{"name", name}, {"value", value}, {"limit", limit}, {"pass", pass}};
}

json check_le(const std::string& name, double value, double limit) {
  return check(name, value, limit, std::isfinite(value) && value <= limit);
}

json envelope(Command cmd, const SimConfig& cfg) {
  return {{"schema", "beamfluid/summary"},
          {"schema_version", kSchemaVersion},
          {"command", command_name(cmd)},
          {"status", "ok"},
          {"config", cfg.to_json()},
          {"checks", json::array()},
          {"results", json::object()},
          {"outputs", json::array()}};
}

void finish(json& summary, const fs::path& dir) {
  bool all = true;
  for (const auto& c : summary["checks"]) all = all && c["pass"].get<bool>();
  summary["status"] = all ? "ok" : "checks_failed";
  summary["outputs"].push_back("summary.json");
  write_json(dir / "summary.json", summary);
}

std::string step_name(const std::string& prefix, std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08zu", step);
  return prefix + "_" + buf + ".csv";
}

double h_floor_for(const SimConfig& cfg, const ScalarField1D& h0) {
  return cfg.h_floor < 0.0 ? default_h_floor(h0) : cfg.h_floor;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double observed_order(double e_coarse, double e_fine, double ratio) {
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

// ---------------------------------------------------------------- reduced

ReducedTrajectory run_reduced(const SimConfig& cfg, double dt, std::size_t record_every) {
  const PeriodicGrid1D g(cfg.L, cfg.nx);
  const ScalarField1D b0 = cfg.h0.sample(g), v0 = cfg.hdot0.sample(g);
  return simulate_reduced(b0, v0, cfg.beam, {dt, cfg.T, h_floor_for(cfg, b0), record_every});
}

json simulate_reduced_cmd(const SimConfig& cfg, const fs::path& dir) {
  json summary = envelope(Command::SimulateReduced, cfg);
  const std::size_t record_every = cfg.snapshot_every > 0 ? cfg.snapshot_every : 1;
  const ReducedTrajectory traj = run_reduced(cfg, cfg.dt, record_every);
  const std::vector<double> res = energy_identity_residual(traj);
  const auto& d = traj.diagnostics;

  {
    JsonlWriter w(dir / "diagnostics.jsonl");
    for (std::size_t n = 0; n < d.size(); ++n) {
      const ReducedDiagnostics& r = d[n];
      json rec = {{"schema", "beamfluid/reduced-step"},
                  {"step", r.step},
                  {"t", r.t},
                  {"energy", r.energy},
                  {"dissipation_rate", r.dissipation_rate},
                  {"lyapunov", r.lyapunov},
                  {"lyapunov_rate", r.lyapunov_rate},
                  {"min_h", r.min_b},
                  {"mass", r.mass},
                  {"mean_q", r.mean_q},
                  {"sup_inv_h", r.sup_inv_b},
                  {"l1_inv_h", r.l1_inv_b},
                  {"h2_norm", r.h2_norm},
                  {"d_min", d_min(r.l1_inv_b, r.h2_norm, cfg.L)},
                  {"C_t", r.C_t}};
      if (n >= 1 && n - 1 < res.size()) rec["energy_residual"] = res[n - 1];
      w.write(rec);
    }
  }
  summary["outputs"].push_back("diagnostics.jsonl");

  if (cfg.snapshot_every > 0) {
    ensure_dir(dir / "snapshots");
    const PeriodicGrid1D g(cfg.L, cfg.nx);
    std::vector<double> x(g.n);
    for (std::size_t j = 0; j < g.n; ++j) x[j] = g.x(j);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const ReducedState& s = traj.states[i];
      const std::string name = step_name("snapshots/reduced", traj.state_steps[i]);
      write_csv(dir / name, {"x", "h", "hdot", "q"}, {x, s.b.values, s.bdot.values, s.q.values});
      summary["outputs"].push_back(name);
    }
  }

  const double E0 = d.front().energy;
  const double scale = E0 > 0.0 ? E0 : 1.0;
  const NoContactReport nc = no_contact_certificate(traj);
  double min_h = std::numeric_limits<double>::infinity();
  for (const auto& r : d) min_h = std::min(min_h, r.min_b);
  const double mass_drift = std::abs(d.back().mass - d.front().mass);

  summary["checks"].push_back(check_le("energy_identity_relative", max_abs(res) / scale, 1e-3));
  summary["checks"].push_back(check_le("mass_drift", mass_drift, 1e-11));
  summary["checks"].push_back(check("no_contact_certificate_violations", static_cast<double>(nc.violations), 0.0,
                                    nc.ok()));
  summary["results"] = {{"steps", d.size() - 1},
                        {"final_t", d.back().t},
                        {"initial_energy", E0},
                        {"final_energy", d.back().energy},
                        {"max_energy_residual", max_abs(res)},
                        {"min_h", min_h},
                        {"mass_drift", mass_drift},
                        {"min_certificate_margin", nc.min_margin}};
  return summary;
}

// ---------------------------------------------------------------- coupled

CoupledTrajectory run_coupled(const SimConfig& cfg, double dt, std::size_t record_every) {
  const PeriodicGrid1D g(cfg.L, cfg.nx);
  const ScalarField1D h0 = cfg.h0.sample(g), v0 = cfg.hdot0.sample(g);
  const CoupledState init = initial_coupled_state(h0, v0, cfg.u0, cfg.nz, cfg.fluid);
  check_compatibility(init);
  CoupledRunOptions opt;
  opt.dt = dt;
  opt.T = cfg.T;
  opt.h_floor = h_floor_for(cfg, h0);
  opt.record_every = record_every;
  return simulate_coupled(init, cfg.beam, cfg.fluid, opt);
}

void write_coupled_snapshot(const CoupledState& s, const DeformationMap& map, const fs::path& dir,
                            std::size_t step, json& outputs) {
  const PeriodicGrid1D& g = s.beam.h.grid;
  std::vector<double> x(g.n);
  for (std::size_t j = 0; j < g.n; ++j) x[j] = g.x(j);
  const std::string beam_name = step_name("snapshots/beam", step);
  write_csv(dir / beam_name, {"x", "h", "hdot"}, {x, s.beam.h.values, s.beam.hdot.values});
  outputs.push_back(beam_name);

  const ScalarField2D u1 = to_lattice(s.fluid.u.c1, kU2Lattice);
  const ScalarField2D p = to_lattice(s.fluid.p0, kU2Lattice);
  const ScalarField2D& u2 = s.fluid.u.c2;
  const std::size_t nz = u2.nz();
  std::vector<std::vector<double>> cols(7, std::vector<double>(g.n * nz));
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      const std::size_t i = j * nz + k;
      cols[0][i] = u2.x(j);
      cols[1][i] = u2.z(k);
      cols[2][i] = map.h[j] * u2.z(k);
      cols[3][i] = u1(j, k);
      cols[4][i] = u2(j, k);
      cols[5][i] = p(j, k);
      cols[6][i] = p(j, k) + s.fluid.c;
    }
  const std::string fluid_name = step_name("snapshots/fluid", step);
  write_csv(dir / fluid_name, {"x", "z", "y", "u1", "u2", "p0", "p"}, cols);
  outputs.push_back(fluid_name);
}

json simulate_coupled_cmd(const SimConfig& cfg, const fs::path& dir) {
  json summary = envelope(Command::SimulateCoupled, cfg);
  const CoupledTrajectory traj = run_coupled(cfg, cfg.dt, cfg.snapshot_every);
  const std::vector<double> res = energy_balance_residual(traj);
  const auto& d = traj.diagnostics;

  {
    JsonlWriter w(dir / "diagnostics.jsonl");
    for (std::size_t n = 0; n < d.size(); ++n) {
      const CoupledDiagnostics& r = d[n];
      w.write({{"schema", "beamfluid/coupled-step"},
               {"step", r.step},
               {"t", r.t},
               {"energy",
                {{"beam_kinetic", r.energy.beam_kinetic},
                 {"beam_elastic_alpha", r.energy.beam_elastic_alpha},
                 {"beam_elastic_beta", r.energy.beam_elastic_beta},
                 {"fluid_kinetic", r.energy.fluid_kinetic},
                 {"beam_dissipation", r.energy.beam_dissipation},
                 {"fluid_dissipation", r.energy.fluid_dissipation}}},
               {"energy_total", r.energy_total},
               {"dissipation", r.dissipation},
               {"dissipated", r.dissipated},
               {"energy_residual", res[n]},
               {"min_h", r.min_h},
               {"C_t", r.C_t},
               {"distance_bracket", r.distance_bracket},
               {"c", r.c},
               {"load_l2", r.load_l2},
               {"mean_hdot", r.mean_hdot},
               {"divergence", r.divergence},
               {"kinematic_mismatch", r.kinematic_mismatch},
               {"int_hdot_qs", r.int_hdot_qs},
               {"max_speed", r.max_speed}});
    }
  }
  summary["outputs"].push_back("diagnostics.jsonl");

  if (cfg.snapshot_every > 0) {
    ensure_dir(dir / "snapshots");
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const CoupledState& s = traj.states[i];
      write_coupled_snapshot(s, build_deformation(s.beam.h), dir, traj.state_steps[i], summary["outputs"]);
    }
  }

  const double E0 = d.front().energy_total;
  const double scale = E0 > 0.0 ? E0 : 1.0;
  double min_h = std::numeric_limits<double>::infinity(), kin = 0.0, mean_v = 0.0, rise = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    min_h = std::min(min_h, d[n].min_h);
    kin = std::max(kin, d[n].kinematic_mismatch);
    mean_v = std::max(mean_v, std::abs(d[n].mean_hdot));
    if (n > 0) rise = std::max(rise, d[n].energy_total - d[n - 1].energy_total);
  }
  summary["checks"].push_back(check_le("energy_balance_relative", max_abs(res) / scale, 1e-2));
  summary["checks"].push_back(check_le("kinematic_mismatch", kin, 0.0));
  summary["checks"].push_back(check_le("mean_hdot", mean_v, 1e-12));
  summary["checks"].push_back(check_le("energy_increase_relative", rise / scale, 1e-6));
  summary["results"] = {{"steps", d.size() - 1},  {"final_t", d.back().t},
                        {"initial_energy", E0},   {"final_energy", d.back().energy_total},
                        {"dissipated", d.back().dissipated},
                        {"max_energy_residual", max_abs(res)},
                        {"min_h", min_h},         {"final_C_t", d.back().C_t}};
  return summary;
}

// ---------------------------------------------------------------- stokes

StokesProblem stokes_problem_for(const SimConfig& cfg) {
  if (cfg.stokes_problem == "poiseuille") return poiseuille_problem(cfg.nx, cfg.nz);
  if (cfg.stokes_problem == "manufactured") return manufactured_stokes_problem(cfg.nx, cfg.nz);
  return random_stokes_problem(cfg.nx, cfg.nz, cfg.seed, cfg.stokes_amplitude);
}

json stokes_cmd(const SimConfig& cfg, const fs::path& dir) {
  json summary = envelope(Command::StokesSolve, cfg);
  const StokesProblem pb = stokes_problem_for(cfg);
  const StokesSolution sol = solve_stokes(pb);
  const EllipticSample es = elliptic_sample(pb, sol);

  json rec = {{"schema", "beamfluid/stokes-solution"},
              {"problem", cfg.stokes_problem},
              {"nx", cfg.nx},
              {"nz", cfg.nz},
              {"r0", pb.map.r0},
              {"c", sol.c},
              {"divergence_residual", sol.divergence_residual},
              {"load_l2", l2_norm(sol.load)},
              {"elliptic_ratio", es.ratio},
              {"solution_norm", es.solution_norm},
              {"data_norm", es.data_norm}};
  summary["checks"].push_back(check_le("divergence_residual", sol.divergence_residual, 1e-8));
  if (cfg.stokes_problem != "random") {
    const StokesErrors e =
        cfg.stokes_problem == "poiseuille" ? poiseuille_errors(sol) : manufactured_stokes_errors(sol, pb);
    rec["u_l2_error"] = e.u_l2;
    rec["p_l2_error"] = e.p_l2;
    rec["u_max_error"] = e.u_max;
    if (cfg.stokes_problem == "poiseuille") summary["checks"].push_back(check_le("poiseuille_u_l2", e.u_l2, 1e-10));
  }
  JsonlWriter(dir / "diagnostics.jsonl").write(rec);
  summary["outputs"].push_back("diagnostics.jsonl");

  ensure_dir(dir / "snapshots");
  CoupledState s{BeamState{pb.map.h, ScalarField1D(pb.map.h.grid), 0.0}, FluidState{sol.u, sol.p0, sol.c}, 0.0};
  write_coupled_snapshot(s, pb.map, dir, 0, summary["outputs"]);
  rec.erase("schema");
  summary["results"] = rec;
  return summary;
}

// ---------------------------------------------------------------- ensembles

json inequalities_cmd(const SimConfig& cfg, const fs::path& dir) {
  json summary = envelope(Command::VerifyInequalities, cfg);
  const std::size_t size = ensemble_size(cfg, Command::VerifyInequalities);
  const PeriodicGrid1D g(cfg.L, cfg.nx);
  const InequalityEnsembleReport rep = inequality_ensemble(g, cfg.seed, size, cfg.jobs);
  {
    JsonlWriter w(dir / "members.jsonl");
    for (std::size_t i = 0; i < size; ++i) {
      const InequalityMember& m = rep.members[i];
      json ratios;
      for (std::size_t k = 0; k < InequalityMember::kCount; ++k) ratios[InequalityMember::names[k]] = m.ratio[k];
      w.write({{"schema", "beamfluid/inequality-member"},
               {"index", i},
               {"ratios", ratios},
               {"sup_inv", m.sup_inv},
               {"d_min", m.d_min},
               {"finite", m.finite}});
    }
  }
  summary["outputs"].push_back("members.jsonl");

  json table = json::object();
  for (std::size_t k = 0; k < InequalityMember::kCount; ++k) {
    const char* name = InequalityMember::names[k];
    table[name] = {{"max_half", rep.max_half[k]},
                   {"max_full", rep.max_full[k]},
                   {"relative_change", rep.relative_change[k]}};
    summary["checks"].push_back(check_le(std::string("stability_") + name, std::abs(rep.relative_change[k]), 0.05));
  }
  summary["checks"].push_back(check_le("nonfinite_members", static_cast<double>(rep.nonfinite), 0.0));
  summary["checks"].push_back(check_le("d_min_violations", static_cast<double>(rep.d_min_violations), 0.0));
  json inv = json::object();
  for (const InvarianceCheck& c : inequality_invariances(g, cfg.seed)) {
    inv[c.name] = c.deviation;
    summary["checks"].push_back(check_le(c.name, c.deviation, 1e-10));
  }
  summary["results"] = {{"ensemble", size},
                        {"seed", cfg.seed},
                        {"ratios", table},
                        {"invariances", inv},
                        {"min_d_min_margin", rep.min_d_min_margin}};
  return summary;
}

json lift_cmd(const SimConfig& cfg, const fs::path& dir) {
  json summary = envelope(Command::LiftCheck, cfg);
  const std::size_t size = ensemble_size(cfg, Command::LiftCheck);
  const LiftEnsembleReport rep = lift_ensemble(cfg.nx, cfg.nz, cfg.seed, size, 5.0, cfg.jobs);
  {
    JsonlWriter w(dir / "members.jsonl");
    for (std::size_t i = 0; i < size; ++i) {
      const LiftMember& m = rep.members[i];
      w.write({{"schema", "beamfluid/lift-member"},
               {"index", i},
               {"r0", m.r0},
               {"divergence_ratio", m.divergence_ratio},
               {"top_exact", m.top_exact},
               {"bottom_zero", m.bottom_zero},
               {"value_mismatch", m.value_mismatch},
               {"derivative_mismatch", m.derivative_mismatch},
               {"continuity", m.continuity},
               {"finite", m.finite}});
    }
  }
  summary["outputs"].push_back("members.jsonl");
  summary["checks"].push_back(check_le("divergence_ratio", rep.max_divergence_ratio, 1e-6));
  summary["checks"].push_back(check("traces_exact", rep.traces_exact ? 1.0 : 0.0, 1.0, rep.traces_exact));
  summary["checks"].push_back(check_le("interface_mismatch", rep.max_interface_mismatch, 1e-8));
  summary["checks"].push_back(check("all_finite", rep.all_finite ? 1.0 : 0.0, 1.0, rep.all_finite));
  summary["results"] = {{"ensemble", size},
                        {"max_divergence_ratio", rep.max_divergence_ratio},
                        {"max_interface_mismatch", rep.max_interface_mismatch},
                        {"max_continuity_ratio", rep.max_continuity}};
  return summary;
}

// ---------------------------------------------------------------- convergence

json convergence_cmd(const SimConfig& cfg, const fs::path& dir) {
  json summary = envelope(Command::ConvergenceStudy, cfg);
  std::vector<double> errors;
  JsonlWriter w(dir / "diagnostics.jsonl");
  for (std::size_t level : cfg.levels) {
    json rec = {{"schema", "beamfluid/convergence-level"}, {"study", cfg.study}, {"level", level}};
    double err = 0.0;
    if (cfg.study == "stokes") {
      const StokesProblem pb = manufactured_stokes_problem(level, level + 1);
      const StokesErrors e = manufactured_stokes_errors(solve_stokes(pb), pb);
      err = e.u_l2;
      rec["p_l2_error"] = e.p_l2;
    } else {
      // time refinement: level / levels[0] halvings of dt
      const double dt = cfg.dt * static_cast<double>(cfg.levels.front()) / static_cast<double>(level);
      rec["dt"] = dt;
      if (cfg.study == "reduced") {
        const ReducedTrajectory t = run_reduced(cfg, dt, std::numeric_limits<std::size_t>::max());
        const double E0 = t.diagnostics.front().energy;
        err = max_abs(energy_identity_residual(t)) / (E0 > 0.0 ? E0 : 1.0);
      } else {
        const CoupledTrajectory t = run_coupled(cfg, dt, 0);
        const double E0 = t.diagnostics.front().energy_total;
        err = max_abs(energy_balance_residual(t)) / (E0 > 0.0 ? E0 : 1.0);
      }
    }
    rec["error"] = err;
    errors.push_back(err);
    w.write(rec);
    spdlog::info("level {} error {:.3e}", level, err);
  }
  summary["outputs"].push_back("diagnostics.jsonl");
  json orders = json::array();
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = static_cast<double>(cfg.levels[i]) / static_cast<double>(cfg.levels[i - 1]);
    const double p = observed_order(errors[i - 1], errors[i], ratio);
    orders.push_back(p);
    summary["checks"].push_back(check("order_" + std::to_string(i), p, 1.8, std::isfinite(p) && p >= 1.8));
  }
  summary["results"] = {{"levels", cfg.levels}, {"errors", errors}, {"orders", orders}};
  return summary;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const InvalidData*>(&e)) return 2;
  if (dynamic_cast<const ContactError*>(&e) || dynamic_cast<const SolverError*>(&e) ||
      dynamic_cast<const ResolutionError*>(&e) || dynamic_cast<const StepSizeError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const GeometryError*>(&e))
    return 3;
  return 1;
}

void configure_logging() {
  spdlog::set_default_logger(spdlog::default_logger()->clone("beamfluid"));
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* v = std::getenv("BEAMFLUID_LOG")) spdlog::set_level(spdlog::level::from_str(v));
}

}  // namespace

void apply_overrides(SimConfig& cfg, const Overrides& o) {
  if (o.out) cfg.out_dir = *o.out;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.seed) cfg.seed = *o.seed;
  if (o.snapshot_every) cfg.snapshot_every = *o.snapshot_every;
  if (o.ensemble) cfg.ensemble = *o.ensemble;
}

json run_command(Command cmd, const SimConfig& cfg) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  json summary;
  switch (cmd) {
    case Command::SimulateReduced: summary = simulate_reduced_cmd(cfg, dir); break;
    case Command::SimulateCoupled: summary = simulate_coupled_cmd(cfg, dir); break;
    case Command::StokesSolve: summary = stokes_cmd(cfg, dir); break;
    case Command::VerifyInequalities: summary = inequalities_cmd(cfg, dir); break;
    case Command::LiftCheck: summary = lift_cmd(cfg, dir); break;
    case Command::ConvergenceStudy: summary = convergence_cmd(cfg, dir); break;
  }
  finish(summary, dir);
  spdlog::info("{} finished in {:.2f} s, status {}", command_name(cmd),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
               summary["status"].get<std::string>());
  return summary;
}

int run(int argc, char** argv) {
  configure_logging();
  CLI::App app{"beamfluid: beam-fluid interaction solvers and verification suites"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides o;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::SimulateReduced, "Reduced thin-film beam model"},
      {Command::SimulateCoupled, "Coupled beam and Navier-Stokes solver"},
      {Command::StokesSolve, "Single Stokes solve on a deformed channel"},
      {Command::VerifyInequalities, "Random-field ensemble for the positivity and stream-function estimates"},
      {Command::LiftCheck, "Random ensemble for the divergence-free lifting"},
      {Command::ConvergenceStudy, "Refinement study (stokes, reduced or coupled)"}};
  std::vector<CLI::App*> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* s = app.add_subcommand(command_name(cmd), help);
    s->add_option("--config", config_path, "TOML or JSON scenario file")->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "Output directory");
    s->add_option("--jobs", o.jobs, "Threads for ensembles");
    s->add_option("--seed", o.seed, "Ensemble seed");
    s->add_option("--snapshot-every", o.snapshot_every, "Steps between CSV snapshots (0: none)");
    s->add_option("--ensemble", o.ensemble, "Ensemble size");
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Command cmd = Command::SimulateReduced;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) cmd = commands[i].first;

  try {
    SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
    apply_overrides(cfg, o);
    validate(cfg, cmd);
    const json summary = run_command(cmd, cfg);
    std::cout << summary["status"].get<std::string>() << " " << (fs::path(cfg.out_dir) / "summary.json").string()
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    const int rc = exit_code_for(e);
    std::cerr << "error: " << e.what() << "\n";
    return rc;
  }
}

}  // namespace bf::cli
