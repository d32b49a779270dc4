#include <gtest/gtest.h>

#include <cmath>

#include "beamfluid/beam.hpp"
#include "beamfluid/errors.hpp"
#include "test_support.hpp"

using namespace bf;
using bf::test::kTwoPi;

namespace {

const PeriodicGrid1D kGrid(1.0, 32);

double sine_coefficient(const ScalarField1D& f, int mode) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * std::sin(kTwoPi * mode * f.grid.x(j) / f.grid.L);
  return 2.0 * s / static_cast<double>(f.size());
}

// Displacement of x'' + c x' + K x = 0 with x(0) = x0, x'(0) = 0 (underdamped).
double damped_oscillator(double x0, double c, double K, double t) {
  const double w = std::sqrt(K - c * c / 4.0);
  return std::exp(-c * t / 2.0) * x0 * (std::cos(w * t) + c / (2.0 * w) * std::sin(w * t));
}

double mode_error(double dt, double T) {
  const BeamParams p{1.0, 1.0, 0.0, 1.0};
  BeamState s{test::sine_profile(kGrid, 1.0, 0.01), ScalarField1D(kGrid), 0.0};
  const ScalarField1D zero(kGrid);
  const auto steps = static_cast<int>(std::lround(T / dt));
  for (int i = 0; i < steps; ++i) s = beam_step(s, zero, dt, p, 0.0);
  const double k = kTwoPi;
  return std::abs(sine_coefficient(s.h, 1) - damped_oscillator(0.01, p.gamma * k * k, p.alpha * k * k * k * k, T));
}

}  // namespace

TEST(BeamParams, RejectsMissingHypotheses) {
  EXPECT_THROW((BeamParams{1.0, 0.0, 0.0, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((BeamParams{1.0, 1.0, 0.0, 0.0}.validate()), InvalidArgument);
  EXPECT_THROW((BeamParams{0.0, 1.0, 0.0, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((BeamParams{1.0, 1.0, -1.0, 1.0}.validate()), InvalidArgument);
  EXPECT_NO_THROW((BeamParams{1.0, 1.0, 0.0, 1.0}.validate()));
}

TEST(BeamOperator, SingleModeEigenfunctions) {
  const BeamParams p{1.0, 2.0, 0.0, 3.0};
  const double k = kTwoPi, a = 0.1;
  const ScalarField1D r1 = beam_elastic_operator({test::sine_profile(kGrid, 1.0, a), ScalarField1D(kGrid)}, p);
  const ScalarField1D r2 = beam_elastic_operator(
      {ScalarField1D::constant(kGrid, 1.0), test::sine_profile(kGrid, 0.0, a)}, p);
  for (std::size_t j = 0; j < kGrid.n; ++j) {
    const double s = a * std::sin(k * kGrid.x(j));
    EXPECT_NEAR(r1[j], p.alpha * std::pow(k, 4) * s, 1e-11 * p.alpha * std::pow(k, 4));
    EXPECT_NEAR(r2[j], p.gamma * k * k * s, 1e-10);
  }
  EXPECT_LT(beam_elastic_operator({ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid)}, p).max_abs(), 1e-14);
}

TEST(BeamEnergy, ParsevalValues) {
  const BeamParams p{2.0, 1.5, 0.5, 0.7};
  const double a = 0.2, b = 0.3, k = kTwoPi;
  const BeamEnergy e = beam_energy({test::sine_profile(kGrid, 1.0, a), test::sine_profile(kGrid, 0.0, b)}, p);
  EXPECT_NEAR(e.elastic_alpha, 0.25 * p.alpha * a * a * std::pow(k, 4), 1e-10);
  EXPECT_NEAR(e.elastic_beta, 0.25 * p.beta * a * a * k * k, 1e-12);
  EXPECT_NEAR(e.kinetic, 0.25 * p.rho_s * b * b, 1e-14);
  EXPECT_NEAR(e.dissipation, 0.5 * p.gamma * b * b * k * k, 1e-12);
}

TEST(BeamStep, EquilibriumIsFixed) {
  const BeamState s{ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid)};
  const BeamState n = beam_step(s, ScalarField1D(kGrid), 1e-2, {}, 0.0);
  EXPECT_EQ(n.h.values, s.h.values);
  EXPECT_LT(n.hdot.max_abs(), 1e-15);
  EXPECT_DOUBLE_EQ(n.t, 1e-2);
}

TEST(BeamStep, DampedOscillatorSecondOrder) {
  const double e1 = mode_error(2e-3, 0.1), e2 = mode_error(1e-3, 0.1);
  EXPECT_LT(e1, 1e-4);
  EXPECT_GT(std::log2(e1 / e2), 1.8);
}

TEST(BeamStep, StaticLoadSteadyState) {
  const BeamParams p{1.0, 1.0, 0.5, 1.0};
  const double a = 3.0, k = kTwoPi;
  BeamState s{ScalarField1D::constant(kGrid, 1.0), ScalarField1D(kGrid)};
  const ScalarField1D load = test::sine_profile(kGrid, 0.0, a);
  for (int i = 0; i < 400; ++i) s = beam_step(s, load, 1e-2, p, 0.0);
  EXPECT_NEAR(sine_coefficient(s.h, 1), a / (p.beta * k * k + p.alpha * std::pow(k, 4)), 1e-10);
}

TEST(BeamStep, UnforcedEnergyMonotoneAndMeanConserved) {
  const BeamParams p{1.0, 1.0, 0.3, 0.5};
  BeamState s{test::sine_profile(kGrid, 1.0, 0.3, 2), test::sine_profile(kGrid, 0.0, 0.4, 3)};
  const double m0 = integrate(s.h);
  double e = beam_energy(s, p).total();
  for (int i = 0; i < 200; ++i) {
    s = beam_step(s, ScalarField1D(kGrid), 1e-3, p, 0.0);
    const double en = beam_energy(s, p).total();
    EXPECT_LE(en, e + 1e-12);
    e = en;
    EXPECT_NEAR(integrate(s.h), m0, 1e-14);
    EXPECT_NEAR(integrate(s.hdot), 0.0, 1e-13);
  }
}

TEST(BeamStep, FrequencyOfConservativeMode) {
  // beta = gamma = 0: the discrete period differs from 2 pi / sqrt(alpha k^4) by O(dt^2)
  auto period_error = [](double dt) {
    const BeamParams p{1.0, 1.0, 0.0, 0.0};
    BeamState s{test::sine_profile(kGrid, 1.0, 0.01), ScalarField1D(kGrid)};
    const double w = kTwoPi * kTwoPi;
    double prev = sine_coefficient(s.h, 1), t_cross = 0.0;
    for (int i = 1; t_cross == 0.0; ++i) {
      s = beam_step(s, ScalarField1D(kGrid), dt, p, 0.0);
      const double c = sine_coefficient(s.h, 1);
      if (prev > 0.0 && c <= 0.0) t_cross = dt * (i - 1 + prev / (prev - c));
      prev = c;
    }
    return std::abs(4.0 * t_cross - kTwoPi / w);  // first zero crossing is a quarter period
  };
  const double e1 = period_error(2e-4), e2 = period_error(1e-4);
  EXPECT_GT(std::log2(e1 / e2), 1.7);
}

TEST(BeamStep, ContactAndMeanChecks) {
  const BeamState s{test::sine_profile(kGrid, 1.0, 0.5), test::sine_profile(kGrid, 0.0, 1000.0)};
  EXPECT_THROW(beam_step(s, ScalarField1D(kGrid), 1e-3, {}, 0.25), ContactError);
  EXPECT_THROW(beam_step(s, ScalarField1D::constant(kGrid, 1.0), 1e-2, {}, 0.0), InvalidData);
}
