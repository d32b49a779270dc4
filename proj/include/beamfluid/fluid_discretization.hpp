#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <vector>

#include "beamfluid/core_fields.hpp"
#include "beamfluid/geometry.hpp"

namespace bf {

// Staggered unknowns on the reference rectangle:
//   u1 at (x_{j+1/2}, z_k), u2 at (x_j, z_k), p at (x_j, z_{k+1/2}),
// k = 0..nzn-1 for velocities and 0..nzn-2 for pressure. Velocity vectors
// hold the u1 block followed by the u2 block.
struct StaggeredLayout {
  std::size_t nx = 0;
  std::size_t nzn = 0;

  std::size_t n_vel() const { return 2 * nx * nzn; }
  std::size_t n_p() const { return nx * (nzn - 1); }
  std::size_t u1(std::size_t j, std::size_t k) const { return j * nzn + k; }
  std::size_t u2(std::size_t j, std::size_t k) const { return nx * nzn + j * nzn + k; }
  std::size_t p(std::size_t j, std::size_t k) const { return j * (nzn - 1) + k; }
  bool on_wall(std::size_t vel_index) const {
    const std::size_t k = vel_index % nzn;
    return k == 0 || k == nzn - 1;
  }
};

constexpr Lattice kU1Lattice{true, false};
constexpr Lattice kU2Lattice{false, false};
constexpr Lattice kPressureLattice{false, true};

using SparseMatrix = Eigen::SparseMatrix<double>;

struct FluidOperators {
  ReferenceGrid2D grid;
  StaggeredLayout layout;
  // viscous form: int |grad u|^2 over Omega_h equals u^T K u
  SparseMatrix K;
  // conservative transformed divergence div(B^T u) times the cell area
  SparseMatrix Dt;
  // h * trapezoid weight * dx per velocity dof; rho_f not included
  Eigen::VectorXd mass;
  // trapezoid weight * dx per velocity dof
  Eigen::VectorXd force_weight;
  double cell_area = 0.0;
};

FluidOperators assemble_fluid_operators(const DeformationMap& map, std::size_t n_z);

Eigen::VectorXd mass_diagonal(const StaggeredLayout& layout, const ReferenceGrid2D& grid, const ScalarField1D& h,
                              const ScalarField1D& h_half);

// Convecting velocity sampled at the faces of each component lattice.
struct ConvectionFaces {
  std::vector<double> u1_c1;  // (x_{j+1}, z_k)
  std::vector<double> u1_c2;  // (x_{j+1/2}, z_{k+1/2})
  std::vector<double> u2_c1;  // (x_{j+1/2}, z_k)
  std::vector<double> u2_c2;  // (x_j, z_{k+1/2})
};

// Skew-symmetric centred convection: v^T S u approximates int (c . grad u) . v.
SparseMatrix convection_matrix(const StaggeredLayout& layout, const ReferenceGrid2D& grid, const ConvectionFaces& c);

// Faces of c = (h u1, -z h_x u1 + u2 - z hdot).
ConvectionFaces convection_faces(const StaggeredLayout& layout, const DeformationMap& map, const Eigen::VectorXd& u,
                                 const ScalarField1D& hdot);

Eigen::VectorXd pack_velocity(const VectorField2D& u, const StaggeredLayout& layout);
VectorField2D unpack_velocity(const Eigen::VectorXd& v, const ReferenceGrid2D& grid);
Eigen::VectorXd pack_pressure(const ScalarField2D& p);
ScalarField2D unpack_pressure(const Eigen::VectorXd& p, const ReferenceGrid2D& grid);

// Resample onto another lattice: Fourier shift in x, linear in z.
ScalarField2D to_lattice(const ScalarField2D& f, Lattice target);

// Discrete div(B^T u) at pressure points for a staggered velocity.
ScalarField2D discrete_divergence(const FluidOperators& ops, const VectorField2D& u);

}  // namespace bf
