#include <gtest/gtest.h>

#include <cmath>

#include "beamfluid/errors.hpp"
#include "beamfluid/fluid_discretization.hpp"
#include "beamfluid/stokes.hpp"
#include "test_support.hpp"

using namespace bf;
using bf::test::kTwoPi;

TEST(ManufacturedStokes, ForcingMatchesSymbolicReference) {
  // f = -lap u + grad p and g = div u evaluated symbolically in exact arithmetic
  struct Ref {
    double x, y, f1, f2, g;
  };
  const Ref refs[] = {{0.10, 0.30, 4.5846449173454585784, 0.072946770020808517903, 1.8146723157333246434},
                      {0.37, 0.80, 4.5656177457524122666, -1.6294419670820847007, -2.5257850400869323720},
                      {0.75, 0.05, -4.6564528109147260673, 0.0, 0.0}};
  for (const Ref& r : refs) {
    const auto f = ManufacturedStokes::f(r.x, r.y);
    EXPECT_NEAR(f[0], r.f1, 1e-12);
    EXPECT_NEAR(f[1], r.f2, 1e-12);
    EXPECT_NEAR(ManufacturedStokes::g(r.x, r.y), r.g, 1e-12);
  }
  // no-slip at the bottom and u2 = cos(2 pi x) on the top
  EXPECT_EQ(ManufacturedStokes::u(0.3, 0.0)[0], 0.0);
  EXPECT_NEAR(ManufacturedStokes::u(0.3, ManufacturedStokes::h(0.3))[1], std::cos(kTwoPi * 0.3), 1e-15);
}

TEST(StokesSolve, PoiseuilleIsReproduced) {
  const StokesProblem pb = poiseuille_problem(16, 9);
  const StokesSolution sol = solve_stokes(pb);
  const StokesErrors e = poiseuille_errors(sol);
  EXPECT_LE(e.u_l2, 1e-10);
  EXPECT_LE(e.p_l2, 1e-10);
  EXPECT_LE(sol.divergence_residual, 1e-12);
  EXPECT_NEAR(sol.c, 0.0, 1e-12);
  EXPECT_LT(sol.load.max_abs(), 1e-10);
}

TEST(StokesSolve, ManufacturedSolutionConvergesAtSecondOrder) {
  double prev_u = 0.0, prev_p = 0.0;
  for (std::size_t n : {16, 32, 64}) {
    const StokesProblem pb = manufactured_stokes_problem(n, n + 1);
    const StokesSolution sol = solve_stokes(pb);
    const StokesErrors e = manufactured_stokes_errors(sol, pb);
    EXPECT_LT(sol.divergence_residual, 1e-10);
    if (prev_u > 0.0) {
      EXPECT_GE(std::log2(prev_u / e.u_l2), 1.8) << "n = " << n;
      EXPECT_GE(std::log2(prev_p / e.p_l2), 1.5) << "n = " << n;
    }
    prev_u = e.u_l2;
    prev_p = e.p_l2;
  }
}

TEST(StokesSolve, PressureGaugeAndLoadMean) {
  const StokesProblem pb = random_stokes_problem(32, 17, 5, 0.3);
  const StokesSolution sol = solve_stokes(pb);
  // p0 has zero mean over Omega_h: sum of h * cell integrals
  ScalarField2D hp = sol.p0;
  for (std::size_t j = 0; j < hp.nx(); ++j)
    for (std::size_t k = 0; k < hp.nz(); ++k) hp(j, k) *= pb.map.h[j];
  EXPECT_NEAR(integrate(hp), 0.0, 1e-11);
  EXPECT_NEAR(integrate(sol.load), 0.0, 1e-11);
  EXPECT_TRUE(std::isfinite(sol.c));
}

TEST(StokesSolve, RejectsIncompatibleBoundaryData) {
  StokesProblem pb = poiseuille_problem(16, 9);
  pb.etadot = ScalarField1D::constant(pb.etadot.grid, 0.5);
  EXPECT_THROW(solve_stokes(pb), InvalidData);
}

TEST(SurfaceLoad, RestFieldGivesZeroLoad) {
  const DeformationMap map = build_deformation(test::sine_profile(PeriodicGrid1D(1.0, 16), 1.0, 0.2));
  const ReferenceGrid2D grid(map.grid(), 9);
  const SurfaceLoad s = surface_load(zero_vector_field(grid), ScalarField2D(grid, kPressureLattice), map);
  EXPECT_LT(s.phi.max_abs(), 1e-15);
  EXPECT_EQ(s.c, 0.0);
}

TEST(DivergenceLifting, HitsPrescribedDivergenceWithZeroTraces) {
  const DeformationMap map = build_deformation(test::sine_profile(PeriodicGrid1D(1.0, 32), 1.0, 0.25));
  const ReferenceGrid2D grid(map.grid(), 17);
  auto chi = ScalarField2D::from_function(
      grid, [](double x, double z) { return std::cos(kTwoPi * x) * (z - 0.5) + std::sin(2 * kTwoPi * x); },
      kPressureLattice);
  const VectorField2D w = divergence_lifting(chi, map);
  const FluidOperators ops = assemble_fluid_operators(map, 17);
  const ScalarField2D div = discrete_divergence(ops, w);
  double err = 0.0;
  for (std::size_t i = 0; i < div.values.size(); ++i) err = std::max(err, std::abs(div.values[i] - chi.values[i]));
  EXPECT_LT(err, 1e-12);
  for (std::size_t j = 0; j < grid.nx(); ++j) {
    EXPECT_EQ(w.c1(j, 0), 0.0);
    EXPECT_EQ(w.c1(j, 16), 0.0);
    EXPECT_EQ(w.c2(j, 0), 0.0);
    EXPECT_EQ(w.c2(j, 16), 0.0);
  }
}

TEST(EllipticConstant, FlatHeightsFormOneBucket) {
  std::vector<StokesProblem> problems;
  for (std::uint64_t s = 0; s < 3; ++s) problems.push_back(random_stokes_problem(32, 17, s, 0.0));
  const EllipticConstantReport r = empirical_elliptic_constant(problems, {0.0, 3.0, 1e9});
  EXPECT_TRUE(r.all_finite);
  EXPECT_EQ(r.bucket_count, (std::vector<std::size_t>{3, 0}));
  for (const auto& s : r.samples) EXPECT_NEAR(s.r0, 2.0, 1e-12);
}

TEST(EllipticConstant, SameDataMaximaNonDecreasingInR0) {
  // identical reference data, flat heights (R0 = 2) against amplitude 0.1 (R0 in (4, 5))
  std::vector<StokesProblem> problems;
  for (double amp : {0.0, 0.1})
    for (std::uint64_t s = 0; s < 6; ++s) problems.push_back(random_stokes_problem(32, 17, s, amp));
  const EllipticConstantReport r = empirical_elliptic_constant(problems, {0.0, 3.0, 1e9});
  EXPECT_TRUE(r.all_finite);
  EXPECT_EQ(r.bucket_count, (std::vector<std::size_t>{6, 6}));
  EXPECT_TRUE(r.non_decreasing);
  EXPECT_GE(r.bucket_max[1], 0.9 * r.bucket_max[0]);
  for (const auto& s : r.samples) EXPECT_GT(s.ratio, 0.0);
}
