#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "beamfluid/analysis.hpp"
#include "beamfluid/errors.hpp"
#include "beamfluid/reduced_model.hpp"
#include "test_support.hpp"

using namespace bf;

namespace {

const PeriodicGrid1D kGrid(1.0, 64);
const BeamParams kUnit{1.0, 1.0, 0.0, 1.0};

ReducedTrajectory pinch(double dt, double T, std::size_t record_every = 1) {
  return simulate_reduced(test::sine_profile(kGrid, 1.0, 0.5), ScalarField1D(kGrid), kUnit,
                          {dt, T, 0.0, record_every});
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(ReducedModel, RestIsStationary) {
  const auto traj = simulate_reduced(ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), kUnit, {1e-3, 0.02});
  ASSERT_EQ(traj.diagnostics.size(), 21u);
  for (const auto& d : traj.diagnostics) {
    EXPECT_EQ(d.energy, 0.0);
    EXPECT_EQ(d.min_b, 1.0);
    EXPECT_NEAR(d.lyapunov, 0.5, 1e-15);
    EXPECT_NEAR(d.C_t, 1.0, 1e-15);
  }
  EXPECT_EQ(max_abs(energy_identity_residual(traj)), 0.0);
  EXPECT_LT(traj.states.back().q.max_abs(), 1e-14);
}

TEST(PressureFromBeam, EquilibriumAndGauge) {
  const ReducedState rest{ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), ScalarField1D(kGrid)};
  EXPECT_LT(pressure_from_beam(rest, kUnit).max_abs(), 1e-14);
  const ReducedState s{test::sine_profile(kGrid, 1.0, 0.2), test::sine_profile(kGrid, 0.0, 0.3, 2), ScalarField1D(kGrid)};
  EXPECT_NEAR(integrate(pressure_from_beam(s, kUnit)), 0.0, 1e-12);
}

TEST(PressureFromBeam, QuasiStaticMatchesDenseSolve) {
  const PeriodicGrid1D g(1.0, 32);
  const BeamParams p{0.0, 1.0, 0.5, 2.0};
  const ScalarField1D b = test::sine_profile(g, 1.0, 0.1);
  const ScalarField1D q = pressure_from_beam({b, ScalarField1D(g), ScalarField1D(g)}, p);

  const int n = 32;
  const double dx = g.spacing();
  Eigen::MatrixXd D2 = Eigen::MatrixXd::Zero(n, n), G = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int jm = (j + n - 1) % n, jp = (j + 1) % n;
    D2(j, jm) += 1.0 / (dx * dx);
    D2(j, j) -= 2.0 / (dx * dx);
    D2(j, jp) += 1.0 / (dx * dx);
    const double mp = 0.5 * (std::pow(b[j], 3) + std::pow(b[jp], 3));
    const double mm = 0.5 * (std::pow(b[jm], 3) + std::pow(b[j], 3));
    G(j, jp) += mp / (dx * dx);
    G(j, j) -= (mp + mm) / (dx * dx);
    G(j, jm) += mm / (dx * dx);
  }
  const Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.values.data(), n);
  const Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n) + p.gamma * D2 * G;
  Eigen::VectorXd ref = K.fullPivLu().solve((-p.beta * D2 + p.alpha * D2 * D2) * bv);
  ref.array() -= ref.mean();
  for (int j = 0; j < n; ++j) EXPECT_NEAR(q[j], ref[j], 1e-9 * ref.cwiseAbs().maxCoeff());
}

TEST(ReducedModel, PinchConservesMassAndDissipatesEnergy) {
  const auto traj = pinch(1e-3, 0.05);
  const auto& d = traj.diagnostics;
  const double E0 = d.front().energy;
  for (std::size_t n = 1; n < d.size(); ++n) {
    EXPECT_LE(d[n].energy, d[n - 1].energy + 1e-8 * E0) << "step " << n;
    EXPECT_NEAR(d[n].mass, d[0].mass, 1e-12);
    EXPECT_NEAR(d[n].mean_q, 0.0, 1e-10);
    EXPECT_GE(d[n].dissipation_rate, 0.0);
    EXPECT_GT(d[n].min_b, 0.0);
  }
  EXPECT_LT(d.back().energy, 0.5 * E0);
}

TEST(ReducedModel, EnergyResidualShrinksUnderRefinement) {
  const double r1 = max_abs(energy_identity_residual(pinch(2e-4, 0.02)));
  const double r2 = max_abs(energy_identity_residual(pinch(1e-4, 0.02)));
  EXPECT_GE(r1 / r2, 1.8);
}

TEST(ReducedModel, DistanceBalanceConverges) {
  const double r1 = max_abs(distance_balance_residual(pinch(2e-4, 0.02)));
  const double r2 = max_abs(distance_balance_residual(pinch(1e-4, 0.02)));
  EXPECT_GE(r1 / r2, 1.8);
}

TEST(DistanceFunctional, ConstantHeights) {
  const ScalarField1D zero(kGrid);
  EXPECT_NEAR(distance_functional({ScalarField1D::constant(kGrid, 1.0), zero, zero}, kUnit), 0.5, 1e-15);
  EXPECT_NEAR(distance_functional({ScalarField1D::constant(kGrid, 2.0), zero, zero}, kUnit), 0.25, 1e-15);
}

TEST(NoContactCertificate, FlatStateMarginMatchesDmin) {
  const auto traj = simulate_reduced(ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid), kUnit, {1e-3, 0.003});
  const NoContactReport r = no_contact_certificate(traj);
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(r.min_margin, d_min(1.0, 1.0, 1.0) - 1.0, 1e-12);
}

TEST(NoContactCertificate, PinchHoldsAtEveryStep) {
  const auto traj = pinch(1e-3, 0.1, 10);
  const NoContactReport r = no_contact_certificate(traj);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.margin.size(), traj.diagnostics.size());
  EXPECT_GT(r.min_margin, 0.0);
}

TEST(ReducedModel, RejectsInvalidInput) {
  const auto b0 = test::sine_profile(kGrid, 1.0, 0.5);
  EXPECT_THROW(simulate_reduced(b0, ScalarField1D::constant(kGrid, 0.1), kUnit, {}), InvalidData);
  EXPECT_THROW(simulate_reduced(b0, ScalarField1D(kGrid), {1.0, 1.0, 0.0, 0.0}, {}), InvalidArgument);
  EXPECT_THROW(simulate_reduced(b0, ScalarField1D(kGrid), kUnit, {1e-3, 0.01, 0.0, 0}), InvalidArgument);
  EXPECT_THROW(simulate_reduced(b0, ScalarField1D(kGrid), kUnit, {1e-3, 0.01, 0.6, 1}), ContactError);
}
