#include "beamfluid/coupled.hpp"

#include <Eigen/UmfPackSupport>
#include <algorithm>
#include <cmath>
#include <string>

#include "beamfluid/analysis.hpp"
#include "beamfluid/errors.hpp"
#include "beamfluid/fluid_discretization.hpp"
#include "beamfluid/lifting.hpp"
#include "beamfluid/stokes.hpp"

namespace bf {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Idx = Eigen::Index;

Mat spectral_matrix(const PeriodicGrid1D& g, int order) {
  Mat D(static_cast<Idx>(g.n), static_cast<Idx>(g.n));
  for (std::size_t l = 0; l < g.n; ++l) {
    ScalarField1D e(g);
    e[l] = 1.0;
    const ScalarField1D d = derivative(e, order);
    for (std::size_t j = 0; j < g.n; ++j) D(static_cast<Idx>(j), static_cast<Idx>(l)) = d[j];
  }
  return D;
}

Vec to_vec(const ScalarField1D& f) { return Eigen::Map<const Vec>(f.values.data(), static_cast<Idx>(f.size())); }

ScalarField1D to_field(const PeriodicGrid1D& g, const Vec& v) {
  return ScalarField1D(g, std::vector<double>(v.data(), v.data() + v.size()));
}

double fluid_gradient_energy(const FluidOperators& ops, const Vec& u) { return u.dot(ops.K * u); }

double sup_inverse(const ScalarField1D& h) {
  if (!(h.min() > 0.0)) throw ContactError("height reached zero", 0.0);
  return 1.0 / h.min();
}

RegularityMonitor monitor_with(const CoupledState& s, const FluidOperators& ops, const FluidParams& f,
                               const BeamParams& b) {
  const ScalarField1D& h = s.beam.h;
  const ScalarField1D hxx = derivative(h, 2), hxxx = derivative(h, 3), vx = derivative(s.beam.hdot, 1);
  RegularityMonitor m;
  m.C = sup_inverse(h) + b.alpha * l2_inner(hxxx, hxxx) + b.gamma * l2_inner(vx, vx) +
        f.mu * fluid_gradient_energy(ops, pack_velocity(s.fluid.u, ops.layout));
  ScalarField1D br(h.grid);
  for (std::size_t j = 0; j < h.size(); ++j)
    br[j] = 0.5 * b.gamma * hxx[j] * hxx[j] - b.rho_s * s.beam.hdot[j] * hxx[j] + 6.0 * f.mu / h[j];
  m.bracket = integrate(br);
  return m;
}

EnergyBreakdown energy_with(const CoupledState& s, const FluidOperators& ops, const BeamParams& b,
                            const FluidParams& f) {
  const BeamEnergy be = beam_energy(s.beam, b);
  const Vec u = pack_velocity(s.fluid.u, ops.layout);
  EnergyBreakdown e;
  e.beam_kinetic = be.kinetic;
  e.beam_elastic_alpha = be.elastic_alpha;
  e.beam_elastic_beta = be.elastic_beta;
  e.beam_dissipation = be.dissipation;
  e.fluid_kinetic = 0.5 * f.rho_f * u.dot(ops.mass.cwiseProduct(u));
  e.fluid_dissipation = f.mu * fluid_gradient_energy(ops, u);
  return e;
}

double max_divergence(const FluidOperators& ops, const Vec& u) {
  return (ops.Dt * u).cwiseAbs().maxCoeff() / ops.cell_area;
}

double pressure_mean(const ScalarField2D& p, const ScalarField1D& h) {
  double ph = 0.0, hs = 0.0;
  for (std::size_t j = 0; j < p.nx(); ++j)
    for (std::size_t k = 0; k < p.nz(); ++k) {
      ph += h[j] * p(j, k);
      hs += h[j];
    }
  return ph / hs;
}

CoupledDiagnostics diagnostics_with(std::size_t step, const CoupledState& s, const FluidOperators& ops,
                                    const BeamParams& b, const FluidParams& f) {
  CoupledDiagnostics d;
  d.step = step;
  d.t = s.t;
  d.energy = energy_with(s, ops, b, f);
  d.energy_total = d.energy.total();
  d.min_h = s.beam.h.min();
  const RegularityMonitor m = monitor_with(s, ops, f, b);
  d.C_t = m.C;
  d.distance_bracket = m.bracket;
  d.c = s.fluid.c;
  d.mean_hdot = mean(s.beam.hdot);
  const std::size_t N = ops.layout.nzn - 1;
  for (std::size_t j = 0; j < ops.layout.nx; ++j)
    d.kinematic_mismatch = std::max(d.kinematic_mismatch, std::abs(s.fluid.u.c2(j, N) - s.beam.hdot[j]));
  d.max_speed = std::max(s.fluid.u.c1.max_abs(), s.fluid.u.c2.max_abs());
  d.int_hdot_qs = stream_multiplier_diagnostics(s, f).int_hdot_qs;
  return d;
}

LiftRecord lift_record(std::size_t step, const CoupledState& s, const FluidOperators& ops) {
  const DeformationMap map = build_deformation(s.beam.h);
  const LiftConfig cfg = make_lift_config(map);
  const ScalarField1D hdot = project_zero_mean(s.beam.hdot);
  const LiftOperator op(hdot, cfg);
  const auto norms = lift_sobolev_norms(op, map);
  const Vec diff = pack_velocity(s.fluid.u, ops.layout) -
                   pack_velocity(build_lift(map, hdot, cfg, ops.layout.nzn, kU1Lattice, kU2Lattice), ops.layout);
  return {step, norms[1], norms[2], std::sqrt(diff.dot(ops.mass.cwiseProduct(diff)))};
}

}  // namespace

void FluidParams::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be > 0");
  if (!(rho_f > 0.0)) throw InvalidArgument("rho_f must be > 0");
}

EnergyBreakdown energy_breakdown(const CoupledState& s, const BeamParams& b, const FluidParams& f) {
  const FluidOperators ops = assemble_fluid_operators(build_deformation(s.beam.h), s.fluid.u.c2.grid.n_z);
  return energy_with(s, ops, b, f);
}

RegularityMonitor regularity_monitor(const CoupledState& s, const FluidParams& f, const BeamParams& b) {
  if (!(s.beam.h.min() > 0.0)) throw ContactError("regularity monitor needs h > 0", s.t);
  const FluidOperators ops = assemble_fluid_operators(build_deformation(s.beam.h), s.fluid.u.c2.grid.n_z);
  return monitor_with(s, ops, f, b);
}

StreamMultiplierRecord stream_multiplier_diagnostics(const CoupledState& s, const FluidParams&) {
  const StreamFunction sf = build_stream_function(s.beam);
  const ScalarField1D& h = s.beam.h;
  StreamMultiplierRecord r;
  ScalarField1D prod(h.grid);
  for (std::size_t j = 0; j < h.size(); ++j) prod[j] = s.beam.hdot[j] * sf.qs[j];
  r.int_hdot_qs = integrate(prod);
  r.qs_at_origin = sf.qs[0];
  r.max_abs_qs = sf.qs.max_abs();
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double x = h.grid.x(j);
    const auto w = sf.w(x, h[j]);
    r.top_trace_error = std::max({r.top_trace_error, std::abs(w[0]), std::abs(w[1] - sf.hxx[j])});
    const HeightJet jet = sf.jet_at_node(j);
    for (int i = 0; i <= 8; ++i) {
      const double y = h[j] * i / 8.0;
      r.psi_yyy_error =
          std::max(r.psi_yyy_error, std::abs(stream_values(jet, y).psi_yyy + 12.0 * jet.hx / (h[j] * h[j] * h[j])));
    }
  }
  return r;
}

CoupledState initial_coupled_state(const ScalarField1D& h0, const ScalarField1D& hdot0, const std::string& kind,
                                   std::size_t n_z, const FluidParams& fluid) {
  fluid.validate();
  if (!(h0.grid == hdot0.grid)) throw InvalidArgument("h0 and hdot0 must share a grid");
  if (!(h0.min() > 0.0)) throw ContactError("initial height must be positive", 0.0);
  const DeformationMap map = build_deformation(h0);
  const ReferenceGrid2D grid(h0.grid, n_z);
  CoupledState s{BeamState{h0, hdot0, 0.0},
                 FluidState{zero_vector_field(grid), ScalarField2D(grid, kPressureLattice), 0.0}, 0.0};
  s.fluid.u.c1 = ScalarField2D(grid, kU1Lattice);
  if (kind == "zero") {
    if (hdot0.max_abs() > 1e-8)
      throw InvalidData("u0 = zero requires hdot0 = 0 (no-slip at the beam)");
  } else if (kind == "stokes") {
    StokesProblem pb{map, zero_vector_field(grid), ScalarField2D(grid), hdot0, fluid.mu};
    const StokesSolution sol = solve_stokes(pb);
    s.fluid.u = sol.u;
    s.fluid.p0 = sol.p0;
    s.fluid.c = sol.c;
  } else {
    throw InvalidArgument("unknown u0 kind '" + kind + "' (expected zero or stokes)");
  }
  return s;
}

void check_compatibility(const CoupledState& s) {
  const ScalarField1D& h = s.beam.h;
  if (!(h.min() > 0.0)) throw ContactError("initial height must be positive", s.t);
  const double vscale = std::max(1.0, s.beam.hdot.max_abs());
  if (std::abs(integrate(s.beam.hdot)) > 1e-8 * vscale) throw InvalidData("hdot0 must have zero mean");
  const ReferenceGrid2D& grid = s.fluid.u.c2.grid;
  const std::size_t N = grid.n_z - 1;
  double trace = 0.0;
  for (std::size_t j = 0; j < grid.nx(); ++j)
    trace = std::max({trace, std::abs(s.fluid.u.c1(j, 0)), std::abs(s.fluid.u.c1(j, N)), std::abs(s.fluid.u.c2(j, 0)),
                      std::abs(s.fluid.u.c2(j, N) - s.beam.hdot[j])});
  if (trace > 1e-8 * vscale) throw InvalidData("initial velocity violates the no-slip / kinematic conditions");
  const FluidOperators ops = assemble_fluid_operators(build_deformation(h), grid.n_z);
  const double div = max_divergence(ops, pack_velocity(s.fluid.u, ops.layout));
  if (div > 1e-8 * vscale / std::min(grid.grid_x.spacing(), grid.dz()))
    throw InvalidData("initial velocity is not divergence free: " + std::to_string(div));
}

CoupledTrajectory simulate_coupled(const CoupledState& initial, const BeamParams& bp, const FluidParams& fp,
                                   const CoupledRunOptions& o) {
  bp.validate();
  fp.validate();
  if (!(o.dt > 0.0) || !(o.T >= 0.0)) throw InvalidArgument("dt must be > 0 and T >= 0");
  check_compatibility(initial);

  const PeriodicGrid1D gx = initial.beam.h.grid;
  const ReferenceGrid2D grid = initial.fluid.u.c2.grid;
  const std::size_t nx = gx.n, nzn = grid.n_z, N = nzn - 1;
  const double dt = o.dt, dx = gx.spacing(), dz = grid.dz();
  const auto steps = static_cast<std::size_t>(std::llround(o.T / dt));

  const Mat D2 = spectral_matrix(gx, 2), D4 = spectral_matrix(gx, 4);
  const Mat Kb = bp.alpha * D4 - bp.beta * D2;
  const Mat beam_block = dx * ((bp.rho_s / dt) * Mat::Identity(static_cast<Idx>(nx), static_cast<Idx>(nx)) +
                               (dt / 4.0) * Kb - 0.5 * bp.gamma * D2);

  CoupledTrajectory traj{bp, fp, dt, {}, {}, {}, {}};
  CoupledState s = initial;
  FluidOperators ops = assemble_fluid_operators(build_deformation(s.beam.h), nzn);
  const StaggeredLayout L = ops.layout;

  auto record_state = [&](std::size_t step) {
    traj.states.push_back(s);
    traj.state_steps.push_back(step);
    if (o.lift_diagnostics) traj.lift.push_back(lift_record(step, s, ops));
  };
  traj.diagnostics.push_back(diagnostics_with(0, s, ops, bp, fp));
  record_state(0);

  // unknowns: interior velocities, top velocity V of the beam, pressure
  std::vector<std::ptrdiff_t> unk(L.n_vel(), -1);
  std::size_t ni = 0;
  for (std::size_t i = 0; i < L.n_vel(); ++i)
    if (!L.on_wall(i)) unk[i] = static_cast<std::ptrdiff_t>(ni++);
  std::vector<std::ptrdiff_t> top(L.n_vel(), -1);
  for (std::size_t j = 0; j < nx; ++j) top[L.u2(j, N)] = static_cast<std::ptrdiff_t>(j);
  const std::size_t n_unknowns = ni + nx + L.n_p();
  const auto prow = [&](Idx r) { return static_cast<Idx>(ni + nx) + r; };

  Vec u_prev = pack_velocity(s.fluid.u, L);
  Vec v_prev = to_vec(s.beam.hdot);
  double dissipated = 0.0;
  Eigen::UmfPackLU<SparseMatrix> lu;

  for (std::size_t n = 0; n < steps; ++n) {
    const Vec un = pack_velocity(s.fluid.u, L);
    const Vec vn = to_vec(s.beam.hdot);
    const Vec hn = to_vec(s.beam.h);
    const Vec ustar = n == 0 ? un : Vec(1.5 * un - 0.5 * u_prev);
    const Vec vstar = n == 0 ? vn : Vec(1.5 * vn - 0.5 * v_prev);

    const double speed = un.cwiseAbs().maxCoeff();
    const double cell = std::min(dx, s.beam.h.min() * dz);
    if (dt * speed / cell > 1.0)
      throw StepSizeError("explicit convection needs dt <= " + std::to_string(cell / speed) + " at t = " +
                          std::to_string(s.t));

    const DeformationMap map = build_deformation(s.beam.h);
    const ScalarField1D hstar = to_field(gx, hn + dt * vstar);
    const Vec Mn = ops.mass;
    const Vec dM = mass_diagonal(L, grid, hstar, shifted(hstar, 0.5 * dx)) - Mn;
    const Vec Mhalf = Mn + 0.5 * dM;
    const Vec diag = fp.rho_f * (2.0 / dt * Mhalf + 0.5 / dt * dM);
    const SparseMatrix S = convection_matrix(L, grid, convection_faces(L, map, ustar, to_field(gx, vstar)));
    const Vec bfl = fp.rho_f * (2.0 / dt * Mhalf.cwiseProduct(un) - S * ustar);

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(ops.K.nonZeros() + 2 * ops.Dt.nonZeros()) + nx * nx + L.n_vel());
    Vec rhs = Vec::Zero(static_cast<Idx>(n_unknowns));
    auto row_of = [&](std::size_t i) -> std::ptrdiff_t {
      if (unk[i] >= 0) return unk[i];
      if (top[i] >= 0) return static_cast<std::ptrdiff_t>(ni) + top[i];
      return -1;
    };
    auto add_fluid = [&](std::size_t i, std::size_t c, double val) {
      const std::ptrdiff_t r = row_of(i);
      if (r < 0) return;
      if (unk[c] >= 0) {
        t.emplace_back(r, unk[c], val);
      } else if (top[c] >= 0) {
        t.emplace_back(r, static_cast<std::ptrdiff_t>(ni) + top[c], 0.5 * val);
        rhs[r] -= 0.5 * val * vn[top[c]];
      }
    };
    for (Idx col = 0; col < ops.K.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(ops.K, col); it; ++it)
        add_fluid(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), fp.mu * it.value());
    for (std::size_t i = 0; i < L.n_vel(); ++i) {
      add_fluid(i, i, diag[static_cast<Idx>(i)]);
      const std::ptrdiff_t r = row_of(i);
      if (r >= 0) rhs[r] += bfl[static_cast<Idx>(i)];
    }
    for (Idx col = 0; col < ops.Dt.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(ops.Dt, col); it; ++it) {
        const auto c = static_cast<std::size_t>(it.col());
        const Idx pr = prow(it.row());
        if (unk[c] >= 0) {
          t.emplace_back(pr, unk[c], -it.value());
          t.emplace_back(unk[c], pr, -it.value());
        } else if (top[c] >= 0) {
          const Idx vr = static_cast<Idx>(ni) + top[c];
          t.emplace_back(pr, vr, -0.5 * it.value());
          rhs[pr] += 0.5 * it.value() * vn[top[c]];
          t.emplace_back(vr, pr, -it.value());
        }
      }
    const Vec beam_rhs = dx * (-(bp.rho_s / dt) * vn + Kb * (hn + 0.25 * dt * vn) - 0.5 * bp.gamma * (D2 * vn));
    for (std::size_t j = 0; j < nx; ++j) {
      for (std::size_t l = 0; l < nx; ++l)
        t.emplace_back(ni + j, ni + l, beam_block(static_cast<Idx>(j), static_cast<Idx>(l)));
      rhs[static_cast<Idx>(ni + j)] -= beam_rhs[static_cast<Idx>(j)];
    }

    SparseMatrix A(static_cast<Idx>(n_unknowns), static_cast<Idx>(n_unknowns));
    A.setFromTriplets(t.begin(), t.end());
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("coupled system factorization failed at t = " + std::to_string(s.t));
    const Vec x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
      throw SolverError("coupled solve failed at t = " + std::to_string(s.t));

    Vec V = x.segment(static_cast<Idx>(ni), static_cast<Idx>(nx));
    V.array() -= V.mean();
    const Vec vmid = 0.5 * (vn + V);
    Vec w = Vec::Zero(static_cast<Idx>(L.n_vel()));
    for (std::size_t i = 0; i < L.n_vel(); ++i) {
      if (unk[i] >= 0) w[static_cast<Idx>(i)] = x[unk[i]];
      if (top[i] >= 0) w[static_cast<Idx>(i)] = vmid[top[i]];
    }
    Vec unext = 2.0 * w - un;
    for (std::size_t j = 0; j < nx; ++j) unext[static_cast<Idx>(L.u2(j, N))] = V[static_cast<Idx>(j)];
    const double constraint = max_divergence(ops, w);

    const BeamState mid{s.beam.h, to_field(gx, vmid), s.t};
    const double H = beam_energy(mid, bp).dissipation + fp.mu * fluid_gradient_energy(ops, w);

    ScalarField2D p = unpack_pressure(x.segment(prow(0), static_cast<Idx>(L.n_p())), grid);
    const double c = pressure_mean(p, s.beam.h);
    for (double& v : p.values) v -= c;

    u_prev = un;
    v_prev = vn;
    const double t_next = initial.t + dt * static_cast<double>(n + 1);
    CoupledState next{BeamState{to_field(gx, hn + dt * vmid), to_field(gx, V), t_next},
                      FluidState{unpack_velocity(unext, grid), p, c}, t_next};
    if (!(next.beam.h.min() > o.h_floor))
      throw ContactError("beam height " + std::to_string(next.beam.h.min()) + " below floor " +
                             std::to_string(o.h_floor) + " at t = " + std::to_string(t_next),
                         t_next);
    s = std::move(next);
    ops = assemble_fluid_operators(build_deformation(s.beam.h), nzn);

    dissipated += dt * H;
    CoupledDiagnostics d = diagnostics_with(n + 1, s, ops, bp, fp);
    d.dissipation = H;
    d.dissipated = dissipated;
    d.divergence = constraint;
    ScalarField1D load(gx);
    const Vec phi = (beam_block * V + beam_rhs) / dx;
    for (std::size_t j = 0; j < nx; ++j) load[j] = phi[static_cast<Idx>(j)];
    d.load_l2 = l2_norm(load);
    traj.diagnostics.push_back(d);
    if ((o.record_every > 0 && (n + 1) % o.record_every == 0) || n + 1 == steps) record_state(n + 1);
  }
  return traj;
}

std::vector<double> energy_balance_residual(const CoupledTrajectory& traj) {
  std::vector<double> r;
  if (traj.diagnostics.empty()) return r;
  const double e0 = traj.diagnostics.front().energy_total;
  r.reserve(traj.diagnostics.size());
  for (const auto& d : traj.diagnostics) r.push_back(d.energy_total + d.dissipated - e0);
  return r;
}

}  // namespace bf
