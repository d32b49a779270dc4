#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "beamfluid/beam.hpp"
#include "beamfluid/core_fields.hpp"

namespace bf {

struct ReducedState {
  ScalarField1D b;
  ScalarField1D bdot;
  ScalarField1D q;
  double t = 0.0;
};

struct ReducedDiagnostics {
  std::size_t step = 0;
  double t = 0.0;
  // discrete energy 1/2 sum(rho v^2 + beta (D+ b)^2 + alpha (D2 b)^2) dx
  double energy = 0.0;
  // gamma |D+ v|^2 + |m^(1/2) D+ q|^2 with the mobility used by the solve
  double dissipation_rate = 0.0;
  double lyapunov = 0.0;
  double min_b = 0.0;
  double h3_seminorm = 0.0;
  double mass = 0.0;
  double mean_q = 0.0;
  // inputs of the no-contact bound
  double sup_inv_b = 0.0;
  double l1_inv_b = 0.0;
  double h2_norm = 0.0;
  // beta |b_xx|^2 + alpha |b_xxx|^2 - rho_s |b_tx|^2, the source side of the
  // Lyapunov balance
  double lyapunov_rate = 0.0;
  // sup 1/b + alpha |b_xxx|^2 + gamma |b_tx|^2 (the blow-up monitor without the fluid term)
  double C_t = 0.0;
};

struct ReducedTrajectory {
  BeamParams params;
  double dt = 0.0;
  // every step
  std::vector<ReducedDiagnostics> diagnostics;
  // every record_every steps plus the final one
  std::vector<ReducedState> states;
  std::vector<std::size_t> state_steps;
};

struct ReducedRunOptions {
  double dt = 1e-4;
  double T = 1.0;
  double h_floor = 0.0;
  std::size_t record_every = 1;
};

// rho_s > 0: q = G^{-1} bdot with the mobility of b. rho_s = 0: q closes the
// quasi-static beam equation together with bdot = G q.
ScalarField1D pressure_from_beam(const ReducedState& state, const BeamParams& params);

ReducedTrajectory simulate_reduced(const ScalarField1D& b0, const ScalarField1D& bdot0, const BeamParams& params,
                                   const ReducedRunOptions& options);

// E_{n+1} - E_{n-1} + 2 dt D_n for n = 1..N-1 (energy units).
std::vector<double> energy_identity_residual(const ReducedTrajectory& traj);

// int 1/2 (gamma b_xx^2 + 1/b) - rho_s int bdot b_xx
double distance_functional(const ReducedState& state, const BeamParams& params);

// F_{n+1} - F_{n-1} + 2 dt (beta |b_xx|^2 + alpha |b_xxx|^2 - rho_s |b_tx|^2)_n
std::vector<double> distance_balance_residual(const ReducedTrajectory& traj);

struct NoContactReport {
  std::vector<double> margin;  // d_min - sup 1/b per step
  double min_margin = 0.0;
  std::size_t violations = 0;
  bool all_positive_b = true;
  bool ok() const { return violations == 0 && all_positive_b; }
};

NoContactReport no_contact_certificate(const ReducedTrajectory& traj);

// Diagnostics of a single state; the dissipation uses the mobility of `mob`.
ReducedDiagnostics reduced_diagnostics(const ReducedState& state, const ScalarField1D& mob, const BeamParams& params);

}  // namespace bf
