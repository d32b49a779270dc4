#include "beamfluid/stokes.hpp"

#include <Eigen/UmfPackSupport>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "beamfluid/errors.hpp"
#include "beamfluid/lifting.hpp"
#include "beamfluid/random_fields.hpp"

namespace bf {

namespace {

using Vec = Eigen::VectorXd;
using Triplets = std::vector<Eigen::Triplet<double>>;

double one_sided_top(double f0, double f1, double f2, double dz) { return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * dz); }

}  // namespace

StokesSolution solve_stokes(const StokesProblem& pb) {
  const DeformationMap& map = pb.map;
  if (!(pb.mu > 0.0)) throw InvalidArgument("viscosity must be > 0");
  if (!(map.min_h > 0.0)) throw ContactError("Stokes domain has min h <= 0", 0.0);
  const std::size_t nz = pb.n_z();
  const FluidOperators ops = assemble_fluid_operators(map, nz);
  const StaggeredLayout& L = ops.layout;
  const ReferenceGrid2D& grid = ops.grid;
  const double dx = grid.grid_x.spacing(), dz = grid.dz();
  if (map.min_h * dz < 1e-4 * dx) throw ResolutionError("min h too small for the vertical resolution");

  // data on the unknown lattices
  const VectorField2D f{to_lattice(pb.f.c1, kU1Lattice), to_lattice(pb.f.c2, kU2Lattice)};
  const ScalarField2D g = to_lattice(pb.g, kPressureLattice);
  const std::size_t np = L.n_p(), nv = L.n_vel();
  Vec G(static_cast<Eigen::Index>(np));
  for (std::size_t j = 0; j < L.nx; ++j)
    for (std::size_t k = 0; k + 1 < L.nzn; ++k)
      G[static_cast<Eigen::Index>(L.p(j, k))] = ops.cell_area * map.h[j] * g(j, k);
  const double flux = dx * std::accumulate(pb.etadot.values.begin(), pb.etadot.values.end(), 0.0);
  const double mismatch = G.sum() - flux;
  if (std::abs(mismatch) > 1e-10 * std::max(1.0, std::abs(flux) + G.cwiseAbs().sum()))
    throw InvalidData("compatibility violated: int etadot - int g = " + std::to_string(-mismatch));
  G.array() -= mismatch / static_cast<double>(np);

  const Vec ul = pack_velocity(build_lift(map, pb.etadot, make_lift_config(map), nz, kU1Lattice, kU2Lattice), L);
  const Vec F = ops.force_weight.cwiseProduct(pack_velocity(f, L));

  std::vector<std::ptrdiff_t> unk(nv, -1);
  std::size_t ni = 0;
  for (std::size_t i = 0; i < nv; ++i)
    if (!L.on_wall(i)) unk[i] = static_cast<std::ptrdiff_t>(ni++);
  // the divergence rows sum to the (compatible) boundary flux, so one of them
  // is redundant; it is replaced by p = 0 in the first cell and the gauge is
  // fixed afterwards
  const std::size_t n = ni + np;

  Triplets t;
  t.reserve(static_cast<std::size_t>(ops.K.nonZeros() + 2 * ops.Dt.nonZeros()) + 1);
  for (Eigen::Index col = 0; col < ops.K.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(ops.K, col); it; ++it) {
      const auto r = unk[static_cast<std::size_t>(it.row())], c = unk[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, pb.mu * it.value());
    }
  for (Eigen::Index col = 0; col < ops.Dt.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(ops.Dt, col); it; ++it) {
      const auto c = unk[static_cast<std::size_t>(it.col())];
      if (c < 0) continue;
      const auto prow = static_cast<std::ptrdiff_t>(ni) + it.row();
      t.emplace_back(c, prow, -it.value());
      if (it.row() != 0) t.emplace_back(prow, c, -it.value());
    }
  t.emplace_back(ni, ni, ops.cell_area);
  SparseMatrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(t.begin(), t.end());

  Vec rhs = Vec::Zero(static_cast<Eigen::Index>(n));
  const Vec Kul = pb.mu * (ops.K * ul);
  for (std::size_t i = 0; i < nv; ++i)
    if (unk[i] >= 0) rhs[unk[i]] = F[static_cast<Eigen::Index>(i)] - Kul[static_cast<Eigen::Index>(i)];
  rhs.segment(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(np)) = -G + ops.Dt * ul;
  rhs[static_cast<Eigen::Index>(ni)] = 0.0;

  Eigen::UmfPackLU<SparseMatrix> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw ResolutionError("Stokes saddle-point system is singular at this resolution");
  const Vec x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("Stokes solve failed");

  Vec u = ul;
  for (std::size_t i = 0; i < nv; ++i)
    if (unk[i] >= 0) u[static_cast<Eigen::Index>(i)] += x[unk[i]];
  Vec p = x.segment(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(np));
  double ph = 0.0, hsum = 0.0;
  for (std::size_t j = 0; j < L.nx; ++j)
    for (std::size_t k = 0; k + 1 < L.nzn; ++k) {
      ph += map.h[j] * p[static_cast<Eigen::Index>(L.p(j, k))];
      hsum += map.h[j];
    }
  p.array() -= ph / hsum;

  StokesSolution sol{unpack_velocity(u, grid), unpack_pressure(p, grid), ScalarField1D(map.grid()), 0.0, 0.0};
  const Vec div = ops.Dt * u - G;
  sol.divergence_residual = std::sqrt(div.squaredNorm() / ops.cell_area);
  const SurfaceLoad load = surface_load(sol.u, sol.p0, map, pb.mu);
  sol.load = load.phi;
  sol.c = load.c;
  return sol;
}

SurfaceLoad surface_load(const VectorField2D& u, const ScalarField2D& p0, const DeformationMap& map, double mu) {
  const ReferenceGrid2D& grid = u.c2.grid;
  const std::size_t nx = grid.nx(), N = grid.n_z - 1;
  const double dz = grid.dz();
  const double half = 0.5 * grid.grid_x.spacing();
  ScalarField1D u1z_half(map.grid()), u2z(map.grid()), top2(map.grid()), ptop(map.grid());
  for (std::size_t j = 0; j < nx; ++j) {
    u1z_half[j] = one_sided_top(u.c1(j, N), u.c1(j, N - 1), u.c1(j, N - 2), dz);
    u2z[j] = one_sided_top(u.c2(j, N), u.c2(j, N - 1), u.c2(j, N - 2), dz);
    top2[j] = u.c2(j, N);
    ptop[j] = 1.5 * p0(j, N - 1) - 0.5 * p0(j, N - 2);
  }
  const ScalarField1D u1z = shifted(u1z_half, -half);
  const ScalarField1D u2x = derivative(top2, 1);
  ScalarField1D raw(map.grid());
  for (std::size_t j = 0; j < nx; ++j) {
    const double h = map.h[j], hx = map.h_x[j];
    // physical derivatives at y = h: d_y = d_z / h, d_x|_y = d_x|_z - (h_x / h) d_z; u1 = 0 on the top
    const double du1dy = u1z[j] / h;
    const double du2dy = u2z[j] / h;
    const double du2dx = u2x[j] - hx / h * u2z[j];
    const double s12 = mu * (du2dx + du1dy);
    const double s22 = 2.0 * mu * du2dy - ptop[j];
    raw[j] = hx * s12 - s22;
  }
  const double m = mean(raw);
  SurfaceLoad out{project_zero_mean(raw), -m};
  return out;
}

VectorField2D divergence_lifting(const ScalarField2D& chi_in, const DeformationMap& map) {
  const ScalarField2D chi = to_lattice(chi_in, kPressureLattice);
  const ReferenceGrid2D& grid = chi.grid;
  const std::size_t nx = grid.nx(), nzn = grid.n_z, N = nzn - 1;
  const double dx = grid.grid_x.spacing(), dz = grid.dz();
  const double total = integrate(chi);
  if (std::abs(total) > 1e-10 * std::max(1.0, chi.max_abs())) throw InvalidData("divergence data must have zero mean");

  std::vector<double> col(nx, 0.0);
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < N; ++k) col[j] += dz * chi(j, k);
  const double cmean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(nx);
  for (double& c : col) c -= cmean;
  // G_{j+1/2} - G_{j-1/2} = dx col_j
  std::vector<double> G(nx, 0.0);
  for (std::size_t j = 1; j < nx; ++j) G[j] = G[j - 1] + dx * col[j];
  const double gmean = std::accumulate(G.begin(), G.end(), 0.0) / static_cast<double>(nx);
  for (double& v : G) v -= gmean;

  // vertical profile M = m'(z), m = z^2 (3 - 2 z), normalised so its cell averages sum to one
  std::vector<double> M(nzn), Mbar(N);
  for (std::size_t k = 0; k < nzn; ++k) {
    const double z = grid.z(k);
    M[k] = 6.0 * z * (1.0 - z);
  }
  double gamma = 0.0;
  for (std::size_t k = 0; k < N; ++k) gamma += dz * 0.5 * (M[k] + M[k + 1]);
  for (double& v : M) v /= gamma;
  for (std::size_t k = 0; k < N; ++k) Mbar[k] = 0.5 * (M[k] + M[k + 1]);

  VectorField2D w{ScalarField2D(grid, kU1Lattice), ScalarField2D(grid, kU2Lattice)};
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < nzn; ++k) w.c1(j, k) = M[k] * G[j] / map.h_half[j];
  for (std::size_t j = 0; j < nx; ++j) {
    const std::size_t jm = (j + nx - 1) % nx;
    double v2 = 0.0;
    for (std::size_t k = 0; k < nzn; ++k) {
      if (k > 0) v2 += dz * (chi(j, k - 1) - Mbar[k - 1] * col[j]);
      const double avg = 0.5 * (w.c1(jm, k) + w.c1(j, k));
      w.c2(j, k) = (k == 0 || k == N) ? 0.0 : v2 + map.h_x[j] * grid.z(k) * avg;
    }
  }
  return w;
}

EllipticSample elliptic_sample(const StokesProblem& pb, const StokesSolution& sol) {
  const DeformationMap& map = pb.map;
  const ScalarField2D u1 = to_lattice(sol.u.c1, kU2Lattice);
  const double nu1 = physical_sobolev_norm(u1, map, 2), nu2 = physical_sobolev_norm(sol.u.c2, map, 2);
  const double np = physical_sobolev_norm(to_lattice(sol.p0, kU2Lattice), map, 1);
  const ScalarField2D f1 = to_lattice(pb.f.c1, kU2Lattice), f2 = to_lattice(pb.f.c2, kU2Lattice);
  ScalarField2D fd(f1.grid);
  for (std::size_t j = 0; j < fd.nx(); ++j)
    for (std::size_t k = 0; k < fd.nz(); ++k) fd(j, k) = (f1(j, k) * f1(j, k) + f2(j, k) * f2(j, k)) / map.h[j];
  const double nf = std::sqrt(integrate(fd));
  const double ng = physical_sobolev_norm(to_lattice(pb.g, kU2Lattice), map, 1);
  const double ne = sobolev_norm_fractional(pb.etadot, 1.5);
  EllipticSample s;
  s.r0 = map.r0;
  s.solution_norm = std::hypot(nu1, nu2) + np;
  s.data_norm = nf + ng + ne;
  s.ratio = s.data_norm > 0.0 ? s.solution_norm / s.data_norm : 0.0;
  return s;
}

EllipticConstantReport empirical_elliptic_constant(const std::vector<StokesProblem>& problems,
                                                   const std::vector<double>& edges, double slack) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
    throw InvalidArgument("bucket edges must be increasing with at least two entries");
  EllipticConstantReport rep;
  rep.bucket_edges = edges;
  rep.bucket_max.assign(edges.size() - 1, 0.0);
  rep.bucket_count.assign(edges.size() - 1, 0);
  for (const auto& pb : problems) {
    const EllipticSample s = elliptic_sample(pb, solve_stokes(pb));
    rep.samples.push_back(s);
    if (!std::isfinite(s.ratio)) rep.all_finite = false;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b)
      if (s.r0 >= edges[b] && s.r0 < edges[b + 1]) {
        rep.bucket_max[b] = std::max(rep.bucket_max[b], s.ratio);
        ++rep.bucket_count[b];
      }
  }
  double prev = -1.0;
  for (std::size_t b = 0; b < rep.bucket_max.size(); ++b) {
    if (rep.bucket_count[b] == 0) continue;
    if (prev >= 0.0 && rep.bucket_max[b] < (1.0 - slack) * prev) rep.non_decreasing = false;
    prev = rep.bucket_max[b];
  }
  return rep;
}

StokesProblem random_stokes_problem(std::size_t nx, std::size_t nz, std::uint64_t seed, double amp) {
  const PeriodicGrid1D gx(1.0, nx);
  const LowPassSpec spec{std::min<int>(8, static_cast<int>(nx / 2) - 1), 2.0};
  auto field = [&](std::uint64_t i) { return random_lowpass_field(gx, member_seed(seed, i), spec); };
  ScalarField1D h = field(0);
  for (auto& v : h.values) v = 1.0 + amp * v;
  const DeformationMap map = build_deformation(h);
  const ReferenceGrid2D grid(gx, nz);
  const ScalarField1D a = field(1), b = field(2), c = field(3), d = field(4);
  StokesProblem pb{map, zero_vector_field(grid), ScalarField2D(grid), 0.5 * d, 1.0};
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      const double z = grid.z(k);
      pb.f.c1(j, k) = h[j] * a[j] * std::sin(std::numbers::pi * z);
      pb.f.c2(j, k) = h[j] * b[j] * 4.0 * z * (1.0 - z);
      pb.g(j, k) = c[j] * 2.0 * z / h[j];
    }
  return pb;
}

}  // namespace bf

namespace bf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAmp = 0.2;

struct Trig {
  double s, c, h, hx, hxx;
  explicit Trig(double x)
      : s(std::sin(kTwoPi * x)),
        c(std::cos(kTwoPi * x)),
        h(1.0 + kAmp * s),
        hx(kAmp * kTwoPi * c),
        hxx(-kAmp * kTwoPi * kTwoPi * s) {}
};

template <class Exact>
StokesErrors stokes_errors(const StokesSolution& sol, const DeformationMap& map, Exact&& exact) {
  const ReferenceGrid2D& grid = sol.u.c2.grid;
  const std::size_t nx = grid.nx(), nzn = grid.n_z;
  const double dx = grid.grid_x.spacing(), dz = grid.dz();
  const std::vector<double> w = trapezoid_weights(nzn, dz);
  StokesErrors e;
  double pm = 0.0, hs = 0.0;
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k + 1 < nzn; ++k) {
      const double y = map.h[j] * sol.p0.z(k);
      pm += map.h[j] * exact.p(sol.p0.x(j), y);
      hs += map.h[j];
    }
  pm /= hs;
  for (std::size_t j = 0; j < nx; ++j) {
    for (std::size_t k = 0; k < nzn; ++k) {
      const double e1 = sol.u.c1(j, k) - exact.u(sol.u.c1.x(j), map.h_half[j] * grid.z(k))[0];
      const double e2 = sol.u.c2(j, k) - exact.u(sol.u.c2.x(j), map.h[j] * grid.z(k))[1];
      e.u_l2 += dx * w[k] * (map.h_half[j] * e1 * e1 + map.h[j] * e2 * e2);
      e.u_max = std::max({e.u_max, std::abs(e1), std::abs(e2)});
    }
    for (std::size_t k = 0; k + 1 < nzn; ++k) {
      const double ep = sol.p0(j, k) - (exact.p(sol.p0.x(j), map.h[j] * sol.p0.z(k)) - pm);
      e.p_l2 += dx * dz * map.h[j] * ep * ep;
    }
  }
  e.u_l2 = std::sqrt(e.u_l2);
  e.p_l2 = std::sqrt(e.p_l2);
  return e;
}

struct PoiseuilleExact {
  std::array<double, 2> u(double, double y) const { return {y * (1.0 - y), 0.0}; }
  double p(double, double) const { return 0.0; }
};

struct ManufacturedExact {
  std::array<double, 2> u(double x, double y) const { return ManufacturedStokes::u(x, y); }
  double p(double x, double y) const { return ManufacturedStokes::p(x, y); }
};

}  // namespace

double ManufacturedStokes::h(double x) { return Trig(x).h; }

std::array<double, 2> ManufacturedStokes::u(double x, double y) {
  const Trig t(x);
  return {t.s * y * (t.h - y), t.c * y * y / (t.h * t.h)};
}

double ManufacturedStokes::p(double x, double y) { return std::cos(kTwoPi * x) * (y - 0.3); }

std::array<double, 2> ManufacturedStokes::f(double x, double y) {
  const Trig t(x);
  const double k = kTwoPi;
  const double s1 = k * t.c, s2 = -k * k * t.s;  // derivatives of sin
  const double c1 = -k * t.s, c2 = -k * k * t.c;  // derivatives of cos
  const double u1xx = y * (s2 * t.h + 2.0 * s1 * t.hx + t.s * t.hxx) - y * y * s2;
  const double u1yy = -2.0 * t.s;
  const double h2 = t.h * t.h, h3 = h2 * t.h, h4 = h3 * t.h;
  const double rxx = c2 / h2 - 4.0 * c1 * t.hx / h3 - 2.0 * t.c * t.hxx / h3 + 6.0 * t.c * t.hx * t.hx / h4;
  const double u2xx = y * y * rxx, u2yy = 2.0 * t.c / h2;
  const double px = c1 * (y - 0.3), py = t.c;
  return {-(u1xx + u1yy) + px, -(u2xx + u2yy) + py};
}

double ManufacturedStokes::g(double x, double y) {
  const Trig t(x);
  const double s1 = kTwoPi * t.c;
  return y * (s1 * t.h + t.s * t.hx) - y * y * s1 + 2.0 * y * t.c / (t.h * t.h);
}

StokesProblem poiseuille_problem(std::size_t nx, std::size_t nz) {
  const PeriodicGrid1D gx(1.0, nx);
  const ReferenceGrid2D grid(gx, nz);
  StokesProblem pb{build_deformation(ScalarField1D::constant(gx, 1.0)), zero_vector_field(grid), ScalarField2D(grid),
                   ScalarField1D(gx), 1.0};
  for (auto& v : pb.f.c1.values) v = 2.0;
  return pb;
}

StokesProblem manufactured_stokes_problem(std::size_t nx, std::size_t nz) {
  const PeriodicGrid1D gx(1.0, nx);
  const ReferenceGrid2D grid(gx, nz);
  const DeformationMap map = build_deformation(ScalarField1D::from_function(gx, ManufacturedStokes::h));
  StokesProblem pb{map, zero_vector_field(grid), ScalarField2D(grid),
                   ScalarField1D::from_function(gx, [](double x) { return std::cos(kTwoPi * x); }), 1.0};
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < nz; ++k) {
      const double x = gx.x(j), h = map.h[j], y = h * grid.z(k);
      const auto f = ManufacturedStokes::f(x, y);
      pb.f.c1(j, k) = h * f[0];
      pb.f.c2(j, k) = h * f[1];
      pb.g(j, k) = ManufacturedStokes::g(x, y);
    }
  return pb;
}

StokesErrors manufactured_stokes_errors(const StokesSolution& sol, const StokesProblem& pb) {
  return stokes_errors(sol, pb.map, ManufacturedExact{});
}

StokesErrors poiseuille_errors(const StokesSolution& sol) {
  const DeformationMap map = build_deformation(ScalarField1D::constant(sol.u.c2.grid.grid_x, 1.0));
  return stokes_errors(sol, map, PoiseuilleExact{});
}

}  // namespace bf
