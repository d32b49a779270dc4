#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "beamfluid/core_fields.hpp"
#include "beamfluid/geometry.hpp"

namespace bf {

struct LiftConfig {
  int k = 2;
  std::vector<double> Q_coeffs;  // ascending powers
  double lambda = 0.0;
};

// Minimal-degree polynomial with Q(0)=1, Q'(0)=Q''(0)=0 and
// Q^(l)(1)=0 for l = 0..k+1, from a small linear solve; the conditions are
// re-checked and a failure throws SolverError.
std::vector<double> lift_polynomial_coefficients(int k);
// Q^(order)(t) for t < 1 and exactly 0 for t >= 1.
double lift_polynomial(const std::vector<double>& coeffs, double t, int order = 0);

// lambda = 1 / (2 R0); GeometryError unless lambda <= min h / 2.
LiftConfig make_lift_config(const DeformationMap& map, int k = 2);

struct LiftJet {
  double u1 = 0.0, u2 = 0.0;
  double u1x = 0.0, u1y = 0.0, u2x = 0.0, u2y = 0.0;
  double u1xx = 0.0, u1xy = 0.0, u1yy = 0.0, u2xx = 0.0, u2xy = 0.0, u2yy = 0.0;
};

// U_h[etadot] in physical coordinates (x, y). Inside the strip 0 <= y <= lambda
// the field is the curl of a Fourier stream function in zeta = (lambda - y) /
// lambda; above it equals (0, etadot(x)).
class LiftOperator {
 public:
  LiftOperator(const ScalarField1D& etadot, const LiftConfig& cfg);

  double lambda() const { return lambda_; }
  const ScalarField1D& etadot() const { return etadot_; }

  LiftJet evaluate(double x, double y) const;
  // Strip formula at every x_j + shift on the line y (0 <= y <= lambda).
  std::vector<LiftJet> line(double y, double shift = 0.0) const;
  // Positions of the kinks of Q(min(2|m| zeta, 1)) inside the strip.
  std::vector<double> kink_heights() const;

 private:
  LiftJet strip(double x, double y) const;

  ScalarField1D etadot_;
  TrigSeries series_;
  std::vector<double> q_;
  double lambda_;
};

// Samples of U_h[etadot](x, h(x) z) on the given lattices. The top trace is
// copied from the etadot samples, so it is exact.
VectorField2D build_lift(const DeformationMap& map, const ScalarField1D& etadot, const LiftConfig& cfg,
                         std::size_t n_z, Lattice lattice1 = {}, Lattice lattice2 = {});

// Physical H^0, H^1, H^2 norms of the lift over Omega_h.
std::array<double, 3> lift_sobolev_norms(const LiftOperator& op, const DeformationMap& map);

// sup |d_x U1 + d_y U2| over horizontal lines of the strip, d_x spectral on
// the x nodes and d_y exact.
double lift_divergence_sup(const LiftOperator& op, std::size_t n_lines = 64);

struct LiftInterfaceReport {
  double value_mismatch = 0.0;       // |U(lambda^-) - U(lambda^+)|
  double derivative_mismatch = 0.0;  // |d_y U(lambda^-) - d_y U(lambda^+)|
};
LiftInterfaceReport lift_interface_matching(const LiftOperator& op);

struct LiftContinuityReport {
  struct Sample {
    double r0 = 0.0;
    std::array<double, 3> ratio{};
  };
  std::vector<Sample> samples;
  std::array<double, 3> max_ratio{};
  // bucket floor(R0) -> max ratio per m
  std::map<int, std::array<double, 3>> bucket_max;
  bool all_finite = true;

  void merge(const LiftContinuityReport& other);
};

LiftContinuityReport lift_continuity_report(const DeformationMap& map, const std::vector<ScalarField1D>& etadots,
                                            int k = 2);

}  // namespace bf
