#pragma once

#include <cmath>
#include <numbers>

#include "beamfluid/core_fields.hpp"

namespace bf::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline ScalarField1D sine_profile(const PeriodicGrid1D& g, double mean, double amp, int mode = 1) {
  return ScalarField1D::from_function(g, [=](double x) { return mean + amp * std::sin(kTwoPi * mode * x / g.L); });
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace bf::test
