#include "beamfluid/beam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "beamfluid/errors.hpp"
#include "fft.hpp"

namespace bf {

void BeamParams::validate() const {
  if (!(rho_s > 0.0)) throw InvalidArgument("rho_s must be > 0");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0 (beam stiffness, required for well-posedness)");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0 (beam viscosity, required for well-posedness)");
}

ScalarField1D beam_elastic_operator(const BeamState& s, const BeamParams& p) {
  const ScalarField1D hxx = derivative(s.h, 2);
  const ScalarField1D hxxxx = derivative(s.h, 4);
  const ScalarField1D vxx = derivative(s.hdot, 2);
  ScalarField1D r(s.h.grid);
  for (std::size_t j = 0; j < r.size(); ++j)
    r[j] = -p.beta * hxx[j] + p.alpha * hxxxx[j] - p.gamma * vxx[j];
  return r;
}

double default_h_floor(const ScalarField1D& h0) { return 1e-4 * h0.min(); }

BeamState beam_step(const BeamState& s, const ScalarField1D& load, double dt, const BeamParams& p,
                    double h_floor) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (std::abs(integrate(load)) > 1e-10 * std::max(1.0, load.max_abs()))
    throw InvalidData("beam load must have zero mean");
  const std::size_t n = s.h.grid.n;
  const double L = s.h.grid.L;
  const auto xh = fft::forward(s.h.values);
  const auto vh = fft::forward(s.hdot.values);
  const auto fh = fft::forward(load.values);
  std::vector<std::complex<double>> v1(xh.size());
  v1[0] = vh[0];
  for (std::size_t m = 1; m < xh.size(); ++m) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / L;
    const double K = p.beta * k * k + p.alpha * k * k * k * k;
    const double C = p.gamma * k * k;
    const double a = dt * dt * K / (4.0 * p.rho_s) + dt * C / (2.0 * p.rho_s);
    v1[m] = (vh[m] * (1.0 - a) - (dt / p.rho_s) * K * xh[m] + (dt / p.rho_s) * fh[m]) / (1.0 + a);
  }
  BeamState out{s.h, ScalarField1D(s.h.grid, fft::inverse(v1, n)), s.t + dt};
  for (std::size_t j = 0; j < n; ++j) out.h[j] += 0.5 * dt * (s.hdot[j] + out.hdot[j]);
  const double hmin = out.h.min();
  if (!(hmin > h_floor))
    throw ContactError("beam height " + std::to_string(hmin) + " below floor " + std::to_string(h_floor) +
                           " at t = " + std::to_string(out.t),
                       out.t);
  return out;
}

BeamEnergy beam_energy(const BeamState& s, const BeamParams& p) {
  BeamEnergy e;
  e.kinetic = 0.5 * p.rho_s * l2_inner(s.hdot, s.hdot);
  e.elastic_alpha = 0.5 * p.alpha * l2_inner(derivative(s.h, 2), derivative(s.h, 2));
  // -int f f_xx keeps the Nyquist mode consistent with the operator
  e.elastic_beta = std::max(0.0, -0.5 * p.beta * l2_inner(s.h, derivative(s.h, 2)));
  e.dissipation = std::max(0.0, -p.gamma * l2_inner(s.hdot, derivative(s.hdot, 2)));
  return e;
}

}  // namespace bf
