#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "beamfluid/core_fields.hpp"
#include "beamfluid/fluid_discretization.hpp"
#include "beamfluid/geometry.hpp"

namespace bf {

struct StokesProblem {
  DeformationMap map;
  // h times the physical source, pulled back to the reference rectangle
  VectorField2D f;
  // physical divergence data pulled back (not multiplied by h)
  ScalarField2D g;
  ScalarField1D etadot;
  double mu = 1.0;

  std::size_t n_z() const { return f.c1.grid.n_z; }
};

struct StokesSolution {
  VectorField2D u;  // u1 on the half-x lattice, u2 on nodes
  ScalarField2D p0;  // cell-centred in z, zero mean over Omega_h
  ScalarField1D load;
  double c = 0.0;
  double divergence_residual = 0.0;  // L2 norm of div(B^T u) - h g
};

StokesSolution solve_stokes(const StokesProblem& problem);

struct SurfaceLoad {
  ScalarField1D phi;  // zero-mean part of the raw load
  double c = 0.0;     // pressure constant making the load mean-free
};

SurfaceLoad surface_load(const VectorField2D& u, const ScalarField2D& p0, const DeformationMap& map, double mu = 1.0);

// w vanishing on both walls with discrete div(B^T w) = chi; chi must have
// zero mean and is taken at the pressure points (other lattices are
// resampled). Returns u1 on the half-x lattice, u2 on nodes.
VectorField2D divergence_lifting(const ScalarField2D& chi, const DeformationMap& map);

struct EllipticSample {
  double r0 = 0.0;
  double solution_norm = 0.0;  // |u; H2| + |p0; H1|
  double data_norm = 0.0;      // |f; L2| + |g; H1| + |etadot; H3/2|
  double ratio = 0.0;
};

struct EllipticConstantReport {
  std::vector<EllipticSample> samples;
  std::vector<double> bucket_edges;
  std::vector<double> bucket_max;  // per bucket [edge_i, edge_{i+1}); 0 if empty
  std::vector<std::size_t> bucket_count;
  bool all_finite = true;
  bool non_decreasing = true;  // within the relative slack
};

EllipticSample elliptic_sample(const StokesProblem& problem, const StokesSolution& solution);
EllipticConstantReport empirical_elliptic_constant(const std::vector<StokesProblem>& problems,
                                                   const std::vector<double>& bucket_edges, double slack = 0.1);

// Smooth random data: h = 1 + amplitude * (unit low-pass field), random
// source, divergence data and mean-free boundary velocity.
StokesProblem random_stokes_problem(std::size_t nx, std::size_t nz, std::uint64_t seed, double h_amplitude);

// h = 1 on L = 1 with f = (2, 0): u = (z (1 - z), 0), p = 0.
StokesProblem poiseuille_problem(std::size_t nx, std::size_t nz);

// Closed-form solution on h = 1 + 0.2 sin(2 pi x), L = 1, mu = 1:
// u = (sin(2 pi x) y (h - y), cos(2 pi x) y^2 / h^2), p = cos(2 pi x)(y - 0.3),
// with f = -lap u + grad p and g = div u.
struct ManufacturedStokes {
  static double h(double x);
  static std::array<double, 2> u(double x, double y);
  static double p(double x, double y);
  static std::array<double, 2> f(double x, double y);
  static double g(double x, double y);
};

StokesProblem manufactured_stokes_problem(std::size_t nx, std::size_t nz);

struct StokesErrors {
  double u_l2 = 0.0;  // over Omega_h, discrete quadrature
  double p_l2 = 0.0;  // after removing the Omega_h mean of the exact pressure
  double u_max = 0.0;
};

StokesErrors manufactured_stokes_errors(const StokesSolution& solution, const StokesProblem& problem);
StokesErrors poiseuille_errors(const StokesSolution& solution);

}  // namespace bf
