#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "beamfluid/core_fields.hpp"

namespace bf {

struct DeformationMap {
  ScalarField1D h;
  ScalarField1D h_x;
  ScalarField1D h_xx;
  // h and h_x at the staggered points x_{j+1/2}
  ScalarField1D h_half;
  ScalarField1D h_x_half;
  double r0 = 0.0;
  double min_h = 0.0;

  const PeriodicGrid1D& grid() const { return h.grid; }
};

DeformationMap build_deformation(const ScalarField1D& h);

struct CoefficientMatrices {
  Eigen::Matrix2d A;
  Eigen::Matrix2d B;
};

CoefficientMatrices coefficient_matrices(const DeformationMap& map, std::size_t j, double z);
CoefficientMatrices coefficient_matrices(double h, double h_x, double z);

// Samples of a field on Omega_h along each vertical fibre x_j; y[j] is
// increasing from 0 to h(x_j).
struct FiberField {
  PeriodicGrid1D grid_x;
  std::vector<std::vector<double>> y;
  std::vector<std::vector<double>> values;
};

FiberField fiber_field_from_function(const DeformationMap& map, std::size_t n_y,
                                     const std::function<double(double, double)>& f);
ScalarField2D to_reference(const FiberField& f, const DeformationMap& map, std::size_t n_z);
// n_y = 0 keeps the reference node count.
FiberField from_reference(const ScalarField2D& f_hat, const DeformationMap& map, std::size_t n_y = 0);

double piola_residual(const VectorField2D& v, const DeformationMap& map);

// Physical-domain H^m norm (m <= 2) of a field given by its node samples on
// the reference grid, through the chain rule of the fibre map.
double physical_sobolev_norm(const ScalarField2D& f_hat, const DeformationMap& map, int m);

// Local cubic Lagrange interpolation on increasing nodes.
double cubic_interpolate(const std::vector<double>& nodes, const std::vector<double>& values, double t);

}  // namespace bf
