#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "beamfluid/coupled.hpp"
#include "beamfluid/errors.hpp"
#include "test_support.hpp"

using namespace bf;

namespace {

const PeriodicGrid1D kGrid(1.0, 32);
const BeamParams kBeam{1.0, 1.0, 0.0, 1.0};
const FluidParams kFluid{1.0, 1.0};

CoupledTrajectory pinch(double dt, double T) {
  const CoupledState s0 = initial_coupled_state(test::sine_profile(kGrid, 1.0, 0.3), ScalarField1D(kGrid), "zero", 17, kFluid);
  CoupledRunOptions o;
  o.dt = dt;
  o.T = T;
  return simulate_coupled(s0, kBeam, kFluid, o);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(FluidParams, Validation) {
  EXPECT_THROW((FluidParams{0.0, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((FluidParams{1.0, -1.0}.validate()), InvalidArgument);
}

TEST(Coupled, RestIsStationary) {
  const CoupledState s0 = initial_coupled_state(ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), "zero", 9, kFluid);
  CoupledRunOptions o;
  o.dt = 1e-2;
  o.T = 0.05;
  const CoupledTrajectory t = simulate_coupled(s0, kBeam, kFluid, o);
  // FFT roundoff of the constant height, amplified by alpha k^4, is the only forcing
  for (const auto& d : t.diagnostics) {
    EXPECT_LT(d.energy_total, 1e-20);
    EXPECT_LT(std::abs(d.c), 1e-8);
    EXPECT_NEAR(d.min_h, 1.0, 1e-12);
  }
  EXPECT_LT(max_abs(energy_balance_residual(t)), 1e-20);
}

TEST(RegularityMonitor, ConstantHeights) {
  for (double h : {1.0, 2.0}) {
    const CoupledState s =
        initial_coupled_state(ScalarField1D::constant(kGrid, h), ScalarField1D(kGrid), "zero", 9, kFluid);
    const RegularityMonitor m = regularity_monitor(s, kFluid, kBeam);
    EXPECT_NEAR(m.C, 1.0 / h, 1e-15);
    EXPECT_NEAR(m.bracket, 6.0 / h, 1e-14);
  }
}

TEST(StreamMultiplier, FlatAndWavyHeights) {
  const CoupledState flat =
      initial_coupled_state(ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), "zero", 9, kFluid);
  const StreamMultiplierRecord f = stream_multiplier_diagnostics(flat, kFluid);
  EXPECT_EQ(f.max_abs_qs, 0.0);
  EXPECT_EQ(f.top_trace_error, 0.0);

  const CoupledState wavy =
      initial_coupled_state(test::sine_profile(kGrid, 1.0, 0.3), ScalarField1D(kGrid), "zero", 9, kFluid);
  const StreamMultiplierRecord w = stream_multiplier_diagnostics(wavy, kFluid);
  EXPECT_EQ(w.qs_at_origin, 0.0);
  EXPECT_LT(w.psi_yyy_error, 1e-12);
  EXPECT_LT(w.top_trace_error, 1e-12);
  EXPECT_GT(w.max_abs_qs, 0.0);
}

TEST(Coupled, PinchEnergyBalanceAndConstraints) {
  const CoupledTrajectory t = pinch(2e-3, 0.04);
  const auto& d = t.diagnostics;
  const double E0 = d.front().energy_total;
  ASSERT_GT(E0, 0.0);
  for (std::size_t n = 1; n < d.size(); ++n) {
    EXPECT_LE(d[n].energy_total, d[n - 1].energy_total + 1e-6 * E0) << "step " << n;
    EXPECT_EQ(d[n].kinematic_mismatch, 0.0);
    EXPECT_LT(std::abs(d[n].mean_hdot), 1e-12);
    EXPECT_GE(d[n].dissipation, 0.0);
    EXPECT_GE(d[n].energy.fluid_dissipation, 0.0);
    EXPECT_TRUE(std::isfinite(d[n].c));
    EXPECT_TRUE(std::isfinite(d[n].C_t));
    EXPECT_LT(d[n].divergence, 1e-9);
  }
  EXPECT_LT(max_abs(energy_balance_residual(t)), 1e-2 * E0);
}

TEST(Coupled, EnergyResidualSecondOrderInDt) {
  const double r1 = max_abs(energy_balance_residual(pinch(4e-3, 0.04)));
  const double r2 = max_abs(energy_balance_residual(pinch(2e-3, 0.04)));
  EXPECT_GE(r1 / r2, 1.8);
}

TEST(Coupled, StokesInitialVelocityIsCompatible) {
  const CoupledState s = initial_coupled_state(test::sine_profile(kGrid, 1.0, 0.2),
                                               test::sine_profile(kGrid, 0.0, 0.5), "stokes", 17, kFluid);
  EXPECT_NO_THROW(check_compatibility(s));
  for (std::size_t j = 0; j < kGrid.n; ++j) EXPECT_EQ(s.fluid.u.c2(j, 16), s.beam.hdot[j]);
}

TEST(Coupled, IncompatibleInitialDataRejected) {
  EXPECT_THROW(initial_coupled_state(ScalarField1D::constant(kGrid, 1.0), test::sine_profile(kGrid, 0.0, 0.5), "zero",
                                     9, kFluid),
               InvalidData);
  CoupledState s = initial_coupled_state(ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), "zero", 9, kFluid);
  s.fluid.u.c2(3, 4) = 1.0;
  EXPECT_THROW(check_compatibility(s), InvalidData);
  EXPECT_THROW(initial_coupled_state(ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), "bogus", 9, kFluid),
               InvalidArgument);
}

TEST(Coupled, ConvectionStepGuard) {
  const PeriodicGrid1D g(1.0, 16);
  const CoupledState s = initial_coupled_state(test::sine_profile(g, 1.0, 0.2), test::sine_profile(g, 0.0, 50.0),
                                               "stokes", 9, kFluid);
  CoupledRunOptions o;
  o.dt = 0.1;
  o.T = 0.2;
  EXPECT_THROW(simulate_coupled(s, kBeam, kFluid, o), StepSizeError);
}

TEST(Coupled, RecordsRequestedStates) {
  const CoupledState s0 = initial_coupled_state(test::sine_profile(kGrid, 1.0, 0.3), ScalarField1D(kGrid), "zero", 9, kFluid);
  CoupledRunOptions o;
  o.dt = 1e-3;
  o.T = 0.01;
  o.record_every = 4;
  o.lift_diagnostics = true;
  const CoupledTrajectory t = simulate_coupled(s0, kBeam, kFluid, o);
  EXPECT_EQ(t.state_steps, (std::vector<std::size_t>{0, 4, 8, 10}));
  EXPECT_EQ(t.lift.size(), t.states.size());
  for (const auto& l : t.lift) EXPECT_TRUE(std::isfinite(l.relative_l2));
}
