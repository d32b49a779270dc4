#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "beamfluid/beam.hpp"
#include "beamfluid/core_fields.hpp"
#include "beamfluid/geometry.hpp"

namespace bf {

struct FluidParams {
  double mu = 1.0;
  double rho_f = 1.0;

  void validate() const;
};

struct FluidState {
  VectorField2D u;  // reference velocity; u1 on the half-x lattice, u2 on nodes
  ScalarField2D p0;  // zero mean over Omega_h
  double c = 0.0;
};

struct CoupledState {
  BeamState beam;
  FluidState fluid;
  double t = 0.0;
};

struct EnergyBreakdown {
  double beam_kinetic = 0.0;
  double beam_elastic_alpha = 0.0;
  double beam_elastic_beta = 0.0;
  double fluid_kinetic = 0.0;
  double beam_dissipation = 0.0;
  double fluid_dissipation = 0.0;

  double total() const { return beam_kinetic + beam_elastic_alpha + beam_elastic_beta + fluid_kinetic; }
  double dissipation() const { return beam_dissipation + fluid_dissipation; }
};

EnergyBreakdown energy_breakdown(const CoupledState& state, const BeamParams& beam, const FluidParams& fluid);

struct RegularityMonitor {
  double C = 0.0;
  // int (gamma/2 h_xx^2 - rho_s hdot h_xx + 6 mu / h)
  double bracket = 0.0;
};

RegularityMonitor regularity_monitor(const CoupledState& state, const FluidParams& fluid, const BeamParams& beam);

struct StreamMultiplierRecord {
  double int_hdot_qs = 0.0;
  double qs_at_origin = 0.0;
  double max_abs_qs = 0.0;
  // max |w(x, h(x)) - h_xx(x) e2| over the nodes
  double top_trace_error = 0.0;
  // max |d_yyy psi + 12 h_x / h^3| over the nodes and 9 heights per fibre
  double psi_yyy_error = 0.0;
};

StreamMultiplierRecord stream_multiplier_diagnostics(const CoupledState& state, const FluidParams& fluid);

struct CoupledDiagnostics {
  std::size_t step = 0;
  double t = 0.0;
  EnergyBreakdown energy;
  double energy_total = 0.0;
  // dissipation of the step ending at t (0 at step 0) and its running sum times dt
  double dissipation = 0.0;
  double dissipated = 0.0;
  double min_h = 0.0;
  double C_t = 0.0;
  double distance_bracket = 0.0;
  double c = 0.0;
  double load_l2 = 0.0;  // L2 norm of the projected load of the step
  double mean_hdot = 0.0;
  double divergence = 0.0;  // max |div(B^T w)| / cell area of the midpoint velocity
  double kinematic_mismatch = 0.0;  // max |u2(x, 1) - hdot|
  double int_hdot_qs = 0.0;
  double max_speed = 0.0;
};

struct LiftRecord {
  std::size_t step = 0;
  // physical H^1 / H^2 norms of the moving-frame field U_h[hdot]
  double h1 = 0.0;
  double h2 = 0.0;
  // L2 norm over Omega_h of u - U_h[hdot] (the multiplier field)
  double relative_l2 = 0.0;
};

struct CoupledTrajectory {
  BeamParams beam;
  FluidParams fluid;
  double dt = 0.0;
  std::vector<CoupledDiagnostics> diagnostics;  // every step
  std::vector<CoupledState> states;             // every record_every steps plus the last
  std::vector<std::size_t> state_steps;
  std::vector<LiftRecord> lift;                  // at the recorded states
};

struct CoupledRunOptions {
  double dt = 1e-3;
  double T = 0.5;
  double h_floor = 0.0;
  std::size_t record_every = 0;  // 0 keeps only the first and last states
  bool lift_diagnostics = false;
};

// u0_kind: "zero" (requires hdot0 = 0) or "stokes" (Stokes extension of hdot0).
CoupledState initial_coupled_state(const ScalarField1D& h0, const ScalarField1D& hdot0, const std::string& u0_kind,
                                   std::size_t n_z, const FluidParams& fluid);

// Throws InvalidData when the kinematic, mean or divergence conditions fail
// beyond 1e-8.
void check_compatibility(const CoupledState& state);

CoupledTrajectory simulate_coupled(const CoupledState& initial, const BeamParams& beam, const FluidParams& fluid,
                                   const CoupledRunOptions& options);

// E_c(t_n) + sum dt H - E_c(0) per step.
std::vector<double> energy_balance_residual(const CoupledTrajectory& traj);

}  // namespace bf
