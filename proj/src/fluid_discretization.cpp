#include "beamfluid/fluid_discretization.hpp"

#include <array>

#include "beamfluid/errors.hpp"

namespace bf {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Local stiffness of one lattice cell with corners (a, b, c, d) =
// (j,k), (j+1,k), (j,k+1), (j+1,k+1) and coefficient A at its centre.
void add_cell(Triplets& t, const std::array<std::size_t, 4>& idx, const Eigen::Matrix2d& A, double dx, double dz) {
  using V4 = Eigen::Vector4d;
  const V4 bx(-1.0 / dx, 1.0 / dx, 0.0, 0.0), tx(0.0, 0.0, -1.0 / dx, 1.0 / dx);
  const V4 lz(-1.0 / dz, 0.0, 1.0 / dz, 0.0), rz(0.0, -1.0 / dz, 0.0, 1.0 / dz);
  const V4 xb = 0.5 * (bx + tx), zb = 0.5 * (lz + rz);
  const Eigen::Matrix4d loc =
      dx * dz *
      (A(0, 0) * 0.5 * (bx * bx.transpose() + tx * tx.transpose()) + A(0, 1) * (xb * zb.transpose() + zb * xb.transpose()) +
       A(1, 1) * 0.5 * (lz * lz.transpose() + rz * rz.transpose()));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) t.emplace_back(idx[a], idx[b], loc(a, b));
}

}  // namespace

Eigen::VectorXd mass_diagonal(const StaggeredLayout& L, const ReferenceGrid2D& grid, const ScalarField1D& h,
                              const ScalarField1D& h_half) {
  const double dx = grid.grid_x.spacing();
  const std::vector<double> w = trapezoid_weights(L.nzn, grid.dz());
  Eigen::VectorXd m(static_cast<Eigen::Index>(L.n_vel()));
  for (std::size_t j = 0; j < L.nx; ++j)
    for (std::size_t k = 0; k < L.nzn; ++k) {
      m[static_cast<Eigen::Index>(L.u1(j, k))] = h_half[j] * w[k] * dx;
      m[static_cast<Eigen::Index>(L.u2(j, k))] = h[j] * w[k] * dx;
    }
  return m;
}

FluidOperators assemble_fluid_operators(const DeformationMap& map, std::size_t n_z) {
  const ReferenceGrid2D grid(map.grid(), n_z);
  const StaggeredLayout L{grid.nx(), n_z};
  const double dx = grid.grid_x.spacing(), dz = grid.dz();
  const std::size_t nx = L.nx, N = n_z - 1;
  FluidOperators ops{grid, L, {}, {}, {}, {}, dx * dz};

  Triplets tk;
  tk.reserve(32 * nx * N);
  for (std::size_t j = 0; j < nx; ++j) {
    const std::size_t jp = (j + 1) % nx;
    for (std::size_t k = 0; k < N; ++k) {
      const double zc = (static_cast<double>(k) + 0.5) * dz;
      // u2 cell centred at (x_{j+1/2}, z_{k+1/2})
      const Eigen::Matrix2d A2 = coefficient_matrices(map.h_half[j], map.h_x_half[j], zc).A;
      add_cell(tk, {L.u2(j, k), L.u2(jp, k), L.u2(j, k + 1), L.u2(jp, k + 1)}, A2, dx, dz);
      // u1 cell centred at (x_{j+1}, z_{k+1/2})
      const Eigen::Matrix2d A1 = coefficient_matrices(map.h[jp], map.h_x[jp], zc).A;
      add_cell(tk, {L.u1(j, k), L.u1(jp, k), L.u1(j, k + 1), L.u1(jp, k + 1)}, A1, dx, dz);
    }
  }
  const auto nv = static_cast<Eigen::Index>(L.n_vel()), np = static_cast<Eigen::Index>(L.n_p());
  ops.K.resize(nv, nv);
  ops.K.setFromTriplets(tk.begin(), tk.end());

  Triplets td;
  td.reserve(12 * nx * N);
  for (std::size_t j = 0; j < nx; ++j) {
    const std::size_t jm = (j + nx - 1) % nx;
    for (std::size_t k = 0; k < N; ++k) {
      const std::size_t row = L.p(j, k);
      // x flux: (h u1 averaged in z) at x_{j+1/2} minus at x_{j-1/2}; rows carry dx dz
      const double cp = 0.5 * map.h_half[j] * dz, cm = 0.5 * map.h_half[jm] * dz;
      td.emplace_back(row, L.u1(j, k), cp);
      td.emplace_back(row, L.u1(j, k + 1), cp);
      td.emplace_back(row, L.u1(jm, k), -cm);
      td.emplace_back(row, L.u1(jm, k + 1), -cm);
      // z flux F_k = -h_x z_k avg_x(u1) + u2, differenced over the cell
      for (int side = 0; side < 2; ++side) {
        const std::size_t kk = k + static_cast<std::size_t>(side);
        const double sgn = side == 0 ? -1.0 : 1.0;
        const double s = -map.h_x[j] * grid.z(kk) * 0.5;
        const double w = sgn * dx;
        td.emplace_back(row, L.u1(jm, kk), w * s);
        td.emplace_back(row, L.u1(j, kk), w * s);
        td.emplace_back(row, L.u2(j, kk), w);
      }
    }
  }
  ops.Dt.resize(np, nv);
  ops.Dt.setFromTriplets(td.begin(), td.end());
  ops.Dt.prune(0.0);

  ops.mass = mass_diagonal(L, grid, map.h, map.h_half);
  const std::vector<double> w = trapezoid_weights(n_z, dz);
  ops.force_weight.resize(nv);
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < n_z; ++k) {
      ops.force_weight[static_cast<Eigen::Index>(L.u1(j, k))] = w[k] * dx;
      ops.force_weight[static_cast<Eigen::Index>(L.u2(j, k))] = w[k] * dx;
    }
  return ops;
}

SparseMatrix convection_matrix(const StaggeredLayout& L, const ReferenceGrid2D& grid, const ConvectionFaces& c) {
  const double dx = grid.grid_x.spacing();
  const std::vector<double> w = trapezoid_weights(L.nzn, grid.dz());
  const std::size_t nx = L.nx, nzn = L.nzn;
  Triplets t;
  t.reserve(8 * L.n_vel());
  auto pair = [&t](std::size_t a, std::size_t b, double v) {
    t.emplace_back(a, b, v);
    t.emplace_back(b, a, -v);
  };
  for (std::size_t j = 0; j < nx; ++j) {
    const std::size_t jp = (j + 1) % nx;
    for (std::size_t k = 0; k < nzn; ++k) {
      pair(L.u1(j, k), L.u1(jp, k), 0.5 * w[k] * c.u1_c1[j * nzn + k]);
      pair(L.u2(j, k), L.u2(jp, k), 0.5 * w[k] * c.u2_c1[j * nzn + k]);
      if (k + 1 < nzn) {
        pair(L.u1(j, k), L.u1(j, k + 1), 0.5 * dx * c.u1_c2[j * (nzn - 1) + k]);
        pair(L.u2(j, k), L.u2(j, k + 1), 0.5 * dx * c.u2_c2[j * (nzn - 1) + k]);
      }
    }
  }
  const auto nv = static_cast<Eigen::Index>(L.n_vel());
  SparseMatrix S(nv, nv);
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

ConvectionFaces convection_faces(const StaggeredLayout& L, const DeformationMap& map, const Eigen::VectorXd& u,
                                 const ScalarField1D& hdot) {
  const std::size_t nx = L.nx, nzn = L.nzn;
  const double dz = 1.0 / static_cast<double>(nzn - 1);
  auto U1 = [&](std::size_t j, std::size_t k) { return u[static_cast<Eigen::Index>(L.u1(j % nx, k))]; };
  auto U2 = [&](std::size_t j, std::size_t k) { return u[static_cast<Eigen::Index>(L.u2(j % nx, k))]; };
  // c1 at (x_{j+1/2}, z_k) and c2 at (x_j, z_k)
  std::vector<double> c1h(nx * nzn), c2n(nx * nzn);
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < nzn; ++k) {
      const double z = dz * static_cast<double>(k);
      c1h[j * nzn + k] = map.h_half[j] * U1(j, k);
      const double u1n = 0.5 * (U1(j + nx - 1, k) + U1(j, k));
      c2n[j * nzn + k] = -z * map.h_x[j] * u1n + U2(j, k) - z * hdot[j];
    }
  ConvectionFaces f;
  f.u1_c1.resize(nx * nzn);
  f.u2_c1 = c1h;
  f.u1_c2.resize(nx * (nzn - 1));
  f.u2_c2.resize(nx * (nzn - 1));
  for (std::size_t j = 0; j < nx; ++j) {
    const std::size_t jp = (j + 1) % nx;
    for (std::size_t k = 0; k < nzn; ++k) f.u1_c1[j * nzn + k] = 0.5 * (c1h[j * nzn + k] + c1h[jp * nzn + k]);
    for (std::size_t k = 0; k + 1 < nzn; ++k) {
      const double a = 0.5 * (c2n[j * nzn + k] + c2n[j * nzn + k + 1]);
      const double b = 0.5 * (c2n[jp * nzn + k] + c2n[jp * nzn + k + 1]);
      f.u2_c2[j * (nzn - 1) + k] = a;
      f.u1_c2[j * (nzn - 1) + k] = 0.5 * (a + b);
    }
  }
  return f;
}

Eigen::VectorXd pack_velocity(const VectorField2D& u, const StaggeredLayout& L) {
  if (!u.c1.lattice.half_x || u.c1.lattice.half_z || u.c2.lattice.half_x || u.c2.lattice.half_z)
    throw InvalidArgument("velocity must use the staggered lattices (u1 at half x, u2 at nodes)");
  Eigen::VectorXd v(static_cast<Eigen::Index>(L.n_vel()));
  for (std::size_t j = 0; j < L.nx; ++j)
    for (std::size_t k = 0; k < L.nzn; ++k) {
      v[static_cast<Eigen::Index>(L.u1(j, k))] = u.c1(j, k);
      v[static_cast<Eigen::Index>(L.u2(j, k))] = u.c2(j, k);
    }
  return v;
}

VectorField2D unpack_velocity(const Eigen::VectorXd& v, const ReferenceGrid2D& grid) {
  const StaggeredLayout L{grid.nx(), grid.n_z};
  VectorField2D u{ScalarField2D(grid, kU1Lattice), ScalarField2D(grid, kU2Lattice)};
  for (std::size_t j = 0; j < L.nx; ++j)
    for (std::size_t k = 0; k < L.nzn; ++k) {
      u.c1(j, k) = v[static_cast<Eigen::Index>(L.u1(j, k))];
      u.c2(j, k) = v[static_cast<Eigen::Index>(L.u2(j, k))];
    }
  return u;
}

Eigen::VectorXd pack_pressure(const ScalarField2D& p) {
  if (p.lattice.half_x || !p.lattice.half_z) throw InvalidArgument("pressure must be cell-centred in z");
  return Eigen::Map<const Eigen::VectorXd>(p.values.data(), static_cast<Eigen::Index>(p.values.size()));
}

ScalarField2D unpack_pressure(const Eigen::VectorXd& p, const ReferenceGrid2D& grid) {
  return ScalarField2D(grid, std::vector<double>(p.data(), p.data() + p.size()), kPressureLattice);
}

ScalarField2D to_lattice(const ScalarField2D& f, Lattice target) {
  ScalarField2D g = f;
  const double dx = f.grid.grid_x.spacing();
  if (f.lattice.half_x != target.half_x) {
    const double s = target.half_x ? 0.5 * dx : -0.5 * dx;
    g = shifted_x(f, s, {target.half_x, f.lattice.half_z});
  }
  if (f.lattice.half_z == target.half_z) return g;
  ScalarField2D r(f.grid, target);
  const std::size_t nzn = f.grid.n_z;
  for (std::size_t j = 0; j < f.nx(); ++j) {
    if (target.half_z) {
      for (std::size_t k = 0; k + 1 < nzn; ++k) r(j, k) = 0.5 * (g(j, k) + g(j, k + 1));
    } else {
      for (std::size_t k = 1; k + 1 < nzn; ++k) r(j, k) = 0.5 * (g(j, k - 1) + g(j, k));
      r(j, 0) = 1.5 * g(j, 0) - 0.5 * g(j, 1);
      r(j, nzn - 1) = 1.5 * g(j, nzn - 2) - 0.5 * g(j, nzn - 3);
    }
  }
  return r;
}

ScalarField2D discrete_divergence(const FluidOperators& ops, const VectorField2D& u) {
  const Eigen::VectorXd d = ops.Dt * pack_velocity(u, ops.layout) / ops.cell_area;
  return unpack_pressure(d, ops.grid);
}

}  // namespace bf
