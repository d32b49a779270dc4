#pragma once

#include <array>
#include <string>
#include <vector>

#include "beamfluid/beam.hpp"
#include "beamfluid/core_fields.hpp"

namespace bf {

// Supremum of |f| over the trigonometric interpolant, not just the samples.
double sup_norm(const ScalarField1D& f);

struct A1Result {
  double lhs = 0.0;
  double rhs_core = 0.0;
  double ratio = 0.0;
};

// int |eta_x|^4 / eta^(4a)  against  ||eta_xx||^2 ||eta||_inf^(2(1-2a)).
A1Result inequality_A1_ratio(const ScalarField1D& eta, double alpha);

struct A2Result {
  double ratio_1 = 0.0;  // sup eta_x^2 / (eta ||eta_xx||^(1/2) ||eta_xxx||^(1/2))
  double ratio_2 = 0.0;  // sup eta_x^2 / (eta ||eta_xxx||)
};

A2Result pointwise_gradient_bounds(const ScalarField1D& eta);

// phi(sigma) = int_0^{L sigma} dz / (1 + z^(3/2))
double phi_sigma(double sigma, double L);
// Upper bound for sup 1/eta from ||1/eta||_L1 and ||eta||_H2.
double d_min(double l1_inv, double h2, double L);

// chi0(z) = z^2 (3 - 2z) and its derivatives.
double chi0(double z, int order = 0);

// h and the derivatives the stream function needs, at one abscissa.
struct HeightJet {
  double h = 1.0, hx = 0.0, hxx = 0.0, hxxx = 0.0;
  double ht = 0.0, hxt = 0.0;
};

// Closed-form derivatives of psi = h_x chi0(y / h).
struct StreamValues {
  double psi, psi_x, psi_y, psi_t, psi_xx, psi_xy, psi_yy, psi_yyy;
};
StreamValues stream_values(const HeightJet& jet, double y);

struct StreamFunction {
  BeamState state;
  ScalarField1D qs;
  // sampled derivatives of h on the grid
  ScalarField1D hx, hxx, hxxx, hxt;
  TrigSeries h_series, ht_series;

  HeightJet jet_at_node(std::size_t j) const;
  HeightJet jet_at(double x) const;
  double psi(double x, double y) const;
  // w = (-psi_y, psi_x)
  std::array<double, 2> w(double x, double y) const;
  // q = q_s + psi_xy
  double q(double x, double y) const;
};

StreamFunction build_stream_function(const BeamState& state);

struct StreamEstimateReport {
  static constexpr std::array<const char*, 5> names{"nablapsi", "dypsi_l2", "dxpsi_l2", "dtpsi_l2t",
                                                     "dxxpsi_l2t"};
  std::array<double, 5> lhs{};
  std::array<double, 5> rhs{};
  std::array<double, 5> ratio{};
};

// Both sides of the five stream-function estimates with the universal
// constant set to 1. Pointwise and fixed-time estimates take the maximum over
// the slice; the two space-time estimates integrate in time with the
// trapezoid rule (a single state counts with unit weight).
StreamEstimateReport stream_norm_estimates(const std::vector<BeamState>& slice);

}  // namespace bf
