#include "beamfluid/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "beamfluid/errors.hpp"

namespace bf {

DeformationMap build_deformation(const ScalarField1D& h) {
  if (!h.finite()) throw InvalidArgument("height field is not finite");
  const double hmin = h.min();
  if (hmin <= 0.0) throw ContactError("height reaches zero: min h = " + std::to_string(hmin), 0.0);
  const double half = 0.5 * h.grid.spacing();
  DeformationMap m{h,
                   derivative(h, 1),
                   derivative(h, 2),
                   shifted(h, half),
                   ScalarField1D(h.grid),
                   0.0,
                   hmin};
  m.h_x_half = shifted(m.h_x, half);
  double inv_max = 0.0;
  for (double v : h.values) inv_max = std::max(inv_max, 1.0 / v);
  m.r0 = sobolev_norm(h, 2) + inv_max;
  return m;
}

CoefficientMatrices coefficient_matrices(double h, double h_x, double z) {
  const double s = h_x * z;
  CoefficientMatrices c;
  c.B << h, -s, 0.0, 1.0;
  c.A << h, -s, -s, 1.0 / h + s * s / h;
  return c;
}

CoefficientMatrices coefficient_matrices(const DeformationMap& map, std::size_t j, double z) {
  if (z < 0.0 || z > 1.0) throw InvalidArgument("z must lie in [0, 1]");
  return coefficient_matrices(map.h[j], map.h_x[j], z);
}

double cubic_interpolate(const std::vector<double>& nodes, const std::vector<double>& values, double t) {
  const std::size_t n = nodes.size();
  if (n < 4) throw InvalidArgument("cubic interpolation needs four nodes");
  std::size_t i = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin());
  std::size_t i0 = i >= 2 ? i - 2 : 0;
  i0 = std::min(i0, n - 4);
  double acc = 0.0;
  for (std::size_t a = i0; a < i0 + 4; ++a) {
    double l = 1.0;
    for (std::size_t b = i0; b < i0 + 4; ++b)
      if (b != a) l *= (t - nodes[b]) / (nodes[a] - nodes[b]);
    acc += l * values[a];
  }
  return acc;
}

FiberField fiber_field_from_function(const DeformationMap& map, std::size_t n_y,
                                     const std::function<double(double, double)>& f) {
  const auto& g = map.grid();
  FiberField r{g, std::vector<std::vector<double>>(g.n), std::vector<std::vector<double>>(g.n)};
  for (std::size_t j = 0; j < g.n; ++j) {
    r.y[j].resize(n_y);
    r.values[j].resize(n_y);
    for (std::size_t m = 0; m < n_y; ++m) {
      const double y = map.h[j] * static_cast<double>(m) / static_cast<double>(n_y - 1);
      r.y[j][m] = y;
      r.values[j][m] = f(g.x(j), y);
    }
  }
  return r;
}

ScalarField2D to_reference(const FiberField& f, const DeformationMap& map, std::size_t n_z) {
  ReferenceGrid2D grid(map.grid(), n_z);
  ScalarField2D r(grid);
  for (std::size_t j = 0; j < grid.nx(); ++j)
    for (std::size_t k = 0; k < n_z; ++k)
      r(j, k) = cubic_interpolate(f.y[j], f.values[j], map.h[j] * grid.z(k));
  return r;
}

FiberField from_reference(const ScalarField2D& f_hat, const DeformationMap& map, std::size_t n_y) {
  if (f_hat.lattice.half_x || f_hat.lattice.half_z)
    throw InvalidArgument("from_reference expects a node-sampled field");
  const auto& grid = f_hat.grid;
  if (n_y == 0) n_y = grid.n_z;
  std::vector<double> zs(grid.n_z);
  for (std::size_t k = 0; k < grid.n_z; ++k) zs[k] = grid.z(k);
  FiberField r{grid.grid_x, std::vector<std::vector<double>>(grid.nx()),
               std::vector<std::vector<double>>(grid.nx())};
  std::vector<double> column(grid.n_z);
  for (std::size_t j = 0; j < grid.nx(); ++j) {
    for (std::size_t k = 0; k < grid.n_z; ++k) column[k] = f_hat(j, k);
    r.y[j].resize(n_y);
    r.values[j].resize(n_y);
    for (std::size_t m = 0; m < n_y; ++m) {
      const double z = static_cast<double>(m) / static_cast<double>(n_y - 1);
      r.y[j][m] = map.h[j] * z;
      r.values[j][m] = cubic_interpolate(zs, column, z);
    }
  }
  return r;
}

double piola_residual(const VectorField2D& v, const DeformationMap& map) {
  const auto& grid = v.c1.grid;
  const std::size_t nx = grid.nx(), nz = grid.n_z;
  ScalarField2D hv1(grid), flux_z(grid);
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      hv1(j, k) = map.h[j] * v.c1(j, k);
      flux_z(j, k) = -map.h_x[j] * grid.z(k) * v.c1(j, k) + v.c2(j, k);
    }
  const ScalarField2D div_a = dx(hv1);
  const ScalarField2D div_b = dz(flux_z);
  const ScalarField2D v1x = dx(v.c1);
  const ScalarField2D v1z = dz(v.c1);
  const ScalarField2D v2z = dz(v.c2);
  ScalarField2D res(grid);
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      const double lhs = div_a(j, k) + div_b(j, k);
      const double rhs = map.h[j] * v1x(j, k) - map.h_x[j] * grid.z(k) * v1z(j, k) + v2z(j, k);
      res(j, k) = lhs - rhs;
    }
  return l2_norm(res);
}

double physical_sobolev_norm(const ScalarField2D& f, const DeformationMap& map, int m) {
  if (m < 0 || m > 2) throw InvalidArgument("physical_sobolev_norm supports m <= 2");
  const auto& grid = f.grid;
  const std::size_t nx = grid.nx(), nz = grid.n_z;
  const ScalarField2D fx = dx(f), fz = dz(f);
  const ScalarField2D fxx = dx(f, 2), fxz = dz(fx), fzz = dz(fz);
  ScalarField2D density(grid);
  for (std::size_t j = 0; j < nx; ++j) {
    const double h = map.h[j], hx = map.h_x[j], hxx = map.h_xx[j];
    for (std::size_t k = 0; k < nz; ++k) {
      const double z = grid.z(k);
      double d = f(j, k) * f(j, k);
      if (m >= 1) {
        const double a = z * hx / h;
        const double px = fx(j, k) - a * fz(j, k);
        const double py = fz(j, k) / h;
        d += px * px + py * py;
        if (m >= 2) {
          const double a_x = z * (hxx / h - hx * hx / (h * h));
          const double a_z = hx / h;
          const double pxx = fxx(j, k) - 2.0 * a * fxz(j, k) + a * a * fzz(j, k) - a_x * fz(j, k) +
                             a * a_z * fz(j, k);
          const double pxy = fxz(j, k) / h - hx * fz(j, k) / (h * h) - a * fzz(j, k) / h;
          const double pyy = fzz(j, k) / (h * h);
          d += pxx * pxx + 2.0 * pxy * pxy + pyy * pyy;
        }
      }
      density(j, k) = d * h;
    }
  }
  return std::sqrt(integrate(density));
}

}  // namespace bf
