#include "beamfluid/reduced_model.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>

#include "beamfluid/analysis.hpp"
#include "beamfluid/errors.hpp"

namespace bf {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Triplets = std::vector<Eigen::Triplet<double>>;

std::size_t wrap(std::ptrdiff_t j, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((j % m) + m) % m);
}

SpMat periodic_d2(std::size_t n, double dx) {
  Triplets t;
  const double s = 1.0 / (dx * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    t.emplace_back(j, wrap(jj - 1, n), s);
    t.emplace_back(j, j, -2.0 * s);
    t.emplace_back(j, wrap(jj + 1, n), s);
  }
  SpMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// m_{j+1/2} = (b_j^3 + b_{j+1}^3) / 2
std::vector<double> face_mobility(const ScalarField1D& b) {
  const std::size_t n = b.size();
  std::vector<double> m(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = b[j], c = b[(j + 1) % n];
    m[j] = 0.5 * (a * a * a + c * c * c);
  }
  return m;
}

void add_mobility_operator(Triplets& t, const std::vector<double>& m, double dx, std::size_t row0, std::size_t col0,
                           double sign) {
  const std::size_t n = m.size();
  const double s = sign / (dx * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = wrap(static_cast<std::ptrdiff_t>(j) - 1, n), jp = (j + 1) % n;
    const double mp = m[j], mm = m[jm];
    t.emplace_back(row0 + j, col0 + jp, s * mp);
    t.emplace_back(row0 + j, col0 + j, -s * (mp + mm));
    t.emplace_back(row0 + j, col0 + jm, s * mm);
  }
}

void add_sparse(Triplets& t, const SpMat& a, double scale, std::size_t row0, std::size_t col0) {
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      t.emplace_back(row0 + static_cast<std::size_t>(it.row()), col0 + static_cast<std::size_t>(it.col()),
                     scale * it.value());
}

Vec as_vec(const ScalarField1D& f) { return Eigen::Map<const Vec>(f.values.data(), static_cast<Eigen::Index>(f.size())); }

ScalarField1D as_field(const PeriodicGrid1D& g, const Vec& v) {
  return {g, std::vector<double>(v.data(), v.data() + v.size())};
}

double forward_diff_sq(const ScalarField1D& f, const std::vector<double>* weight) {
  const std::size_t n = f.size();
  const double dx = f.grid.spacing();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = (f[(j + 1) % n] - f[j]) / dx;
    acc += (weight ? (*weight)[j] : 1.0) * d * d;
  }
  return acc * dx;
}

double second_diff_sq(const ScalarField1D& f) {
  const std::size_t n = f.size();
  const double dx = f.grid.spacing();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = (f[(j + 1) % n] - 2.0 * f[j] + f[(j + n - 1) % n]) / (dx * dx);
    acc += d * d;
  }
  return acc * dx;
}

void check_floor(const ScalarField1D& b, double floor, double t) {
  const double m = b.min();
  if (!(m > floor) || !std::isfinite(m))
    throw ContactError("film height " + std::to_string(m) + " reached floor " + std::to_string(floor) +
                           " at t = " + std::to_string(t),
                       t);
}

class SaddleSolver {
 public:
  void factorize(const SpMat& k) {
    if (!analysed_) {
      lu_.analyzePattern(k);
      analysed_ = true;
    }
    lu_.factorize(k);
    if (lu_.info() != Eigen::Success) throw SolverError("sparse LU factorisation failed: " + lu_.lastErrorMessage());
  }
  Vec solve(const Vec& rhs) {
    Vec x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success || !x.allFinite()) throw SolverError("sparse LU solve failed");
    return x;
  }

 private:
  Eigen::SparseLU<SpMat> lu_;
  bool analysed_ = false;
};

}  // namespace

ReducedDiagnostics reduced_diagnostics(const ReducedState& s, const ScalarField1D& mob, const BeamParams& p) {
  ReducedDiagnostics d;
  d.t = s.t;
  d.energy = 0.5 * (p.rho_s * l2_inner(s.bdot, s.bdot) + p.beta * forward_diff_sq(s.b, nullptr) +
                    p.alpha * second_diff_sq(s.b));
  const std::vector<double> m = face_mobility(mob);
  d.dissipation_rate = p.gamma * forward_diff_sq(s.bdot, nullptr) + forward_diff_sq(s.q, &m);
  d.min_b = s.b.min();
  d.mass = integrate(s.b);
  d.mean_q = mean(s.q);
  if (d.min_b > 0.0) {
    d.lyapunov = distance_functional(s, p);
    double sup_inv = 0.0, l1 = 0.0;
    for (double v : s.b.values) {
      sup_inv = std::max(sup_inv, 1.0 / v);
      l1 += 1.0 / v;
    }
    d.sup_inv_b = sup_inv;
    d.l1_inv_b = l1 * s.b.grid.spacing();
  }
  d.h3_seminorm = l2_norm(derivative(s.b, 3));
  d.h2_norm = sobolev_norm(s.b, 2);
  const double bxx = l2_norm(derivative(s.b, 2)), btx = l2_norm(derivative(s.bdot, 1));
  d.lyapunov_rate = p.beta * bxx * bxx + p.alpha * d.h3_seminorm * d.h3_seminorm - p.rho_s * btx * btx;
  d.C_t = d.sup_inv_b + p.alpha * d.h3_seminorm * d.h3_seminorm + p.gamma * btx * btx;
  return d;
}

ScalarField1D pressure_from_beam(const ReducedState& s, const BeamParams& p) {
  if (!(p.alpha > 0.0) || !(p.gamma > 0.0) || !(p.rho_s >= 0.0) || !(p.beta >= 0.0))
    throw InvalidArgument("pressure_from_beam needs alpha > 0, gamma > 0, rho_s >= 0, beta >= 0");
  check_floor(s.b, 0.0, s.t);
  const std::size_t n = s.b.size();
  const double dx = s.b.grid.spacing();
  const auto N = static_cast<Eigen::Index>(n);
  const std::vector<double> m = face_mobility(s.b);
  Triplets t;
  add_mobility_operator(t, m, dx, 0, 0, 1.0);
  SpMat G(N, N);
  G.setFromTriplets(t.begin(), t.end());
  Vec rhs;
  SpMat K;
  if (p.rho_s > 0.0) {
    // bordered with the mean constraint
    if (std::abs(mean(s.bdot)) > 1e-10 * std::max(1.0, s.bdot.max_abs()))
      throw InvalidData("bdot must have zero mean");
    Triplets tk;
    add_sparse(tk, G, 1.0, 0, 0);
    for (std::size_t j = 0; j < n; ++j) {
      tk.emplace_back(j, n, 1.0);
      tk.emplace_back(n, j, 1.0);
    }
    K = SpMat(N + 1, N + 1);
    K.setFromTriplets(tk.begin(), tk.end());
    rhs = Vec::Zero(N + 1);
    rhs.head(N) = as_vec(s.bdot);
  } else {
    // (I + gamma D2 G) q = (-beta D2 + alpha D4) b
    const SpMat D2 = periodic_d2(n, dx);
    SpMat I(N, N);
    I.setIdentity();
    K = I + p.gamma * (D2 * G);
    const SpMat E = -p.beta * D2 + p.alpha * (D2 * D2);
    rhs = E * as_vec(s.b);
  }
  Eigen::SparseLU<SpMat> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) throw SolverError("pressure system is singular");
  const Vec x = lu.solve(rhs);
  ScalarField1D q = as_field(s.b.grid, x.head(N));
  return project_zero_mean(q);
}

ReducedTrajectory simulate_reduced(const ScalarField1D& b0, const ScalarField1D& bdot0, const BeamParams& p,
                                   const ReducedRunOptions& o) {
  p.validate();
  if (!(b0.grid == bdot0.grid)) throw InvalidArgument("b0 and bdot0 must share a grid");
  if (!(o.dt > 0.0) || !(o.T >= 0.0)) throw InvalidArgument("dt must be > 0 and T >= 0");
  if (o.record_every == 0) throw InvalidArgument("record_every must be >= 1");
  if (!(b0.min() > 0.0)) throw ContactError("initial film height must be positive", 0.0);
  if (std::abs(integrate(bdot0)) > 1e-10) throw InvalidData("initial bdot must have zero mean");
  check_floor(b0, o.h_floor, 0.0);

  const auto& g = b0.grid;
  const std::size_t n = g.n;
  const auto N = static_cast<Eigen::Index>(n);
  const double dx = g.spacing(), dt = o.dt;
  const auto steps = static_cast<std::size_t>(std::llround(o.T / dt));
  const SpMat D2 = periodic_d2(n, dx);
  const SpMat E = -p.beta * D2 + p.alpha * (D2 * D2);
  SpMat I(N, N);
  I.setIdentity();
  const SpMat S1 = (p.rho_s / dt) * I + dt * E - p.gamma * D2;
  const SpMat S2 = (1.5 * p.rho_s / dt) * I + (2.0 * dt / 3.0) * E - p.gamma * D2;

  ReducedTrajectory traj;
  traj.params = p;
  traj.dt = dt;
  ReducedState cur{b0, project_zero_mean(bdot0), ScalarField1D(g), 0.0};
  cur.q = pressure_from_beam(cur, p);
  ReducedState prev = cur;
  traj.diagnostics.push_back(reduced_diagnostics(cur, cur.b, p));
  traj.states.push_back(cur);
  traj.state_steps.push_back(0);

  SaddleSolver solver1, solver2;
  Triplets t;
  for (std::size_t step = 1; step <= steps; ++step) {
    const bool first = step == 1;
    t.clear();
    add_sparse(t, first ? S1 : S2, 1.0, 0, 0);
    for (std::size_t j = 0; j < n; ++j) {
      t.emplace_back(j, n + j, -1.0);
      t.emplace_back(n + j, j, -1.0);
    }
    add_mobility_operator(t, face_mobility(cur.b), dx, n, n, 1.0);
    SpMat K(2 * N, 2 * N);
    K.setFromTriplets(t.begin(), t.end());

    const Vec bn = as_vec(cur.b), vn = as_vec(cur.bdot);
    Vec rhs = Vec::Zero(2 * N);
    Vec b_base;
    double b_scale;
    if (first) {
      rhs.head(N) = (p.rho_s / dt) * vn - E * bn;
      b_base = bn;
      b_scale = dt;
    } else {
      const Vec bp = as_vec(prev.b), vp = as_vec(prev.bdot);
      b_base = (4.0 * bn - bp) / 3.0;
      rhs.head(N) = p.rho_s * (4.0 * vn - vp) / (2.0 * dt) - E * b_base;
      b_scale = 2.0 * dt / 3.0;
    }
    SaddleSolver& solver = first ? solver1 : solver2;
    solver.factorize(K);
    const Vec x = solver.solve(rhs);
    Vec v = x.head(N);
    v.array() -= v.mean();
    Vec q = x.tail(N);
    q.array() -= q.mean();
    const Vec bnew = b_base + b_scale * v;

    ReducedState next{as_field(g, bnew), as_field(g, v), as_field(g, q), static_cast<double>(step) * dt};
    ReducedDiagnostics d = reduced_diagnostics(next, cur.b, p);
    d.step = step;
    traj.diagnostics.push_back(d);
    check_floor(next.b, o.h_floor, next.t);
    prev = std::move(cur);
    cur = std::move(next);
    if (step % o.record_every == 0 || step == steps) {
      traj.states.push_back(cur);
      traj.state_steps.push_back(step);
    }
  }
  return traj;
}

std::vector<double> energy_identity_residual(const ReducedTrajectory& traj) {
  const auto& d = traj.diagnostics;
  std::vector<double> r;
  for (std::size_t i = 1; i + 1 < d.size(); ++i)
    r.push_back(d[i + 1].energy - d[i - 1].energy + 2.0 * traj.dt * d[i].dissipation_rate);
  return r;
}

double distance_functional(const ReducedState& s, const BeamParams& p) {
  if (!(s.b.min() > 0.0)) throw ContactError("distance functional needs b > 0", s.t);
  const ScalarField1D bxx = derivative(s.b, 2);
  ScalarField1D dens(s.b.grid);
  for (std::size_t j = 0; j < dens.size(); ++j)
    dens[j] = 0.5 * (p.gamma * bxx[j] * bxx[j] + 1.0 / s.b[j]) - p.rho_s * s.bdot[j] * bxx[j];
  return integrate(dens);
}

std::vector<double> distance_balance_residual(const ReducedTrajectory& traj) {
  const auto& d = traj.diagnostics;
  std::vector<double> r;
  for (std::size_t i = 1; i + 1 < d.size(); ++i)
    r.push_back(d[i + 1].lyapunov - d[i - 1].lyapunov + 2.0 * traj.dt * d[i].lyapunov_rate);
  return r;
}

NoContactReport no_contact_certificate(const ReducedTrajectory& traj) {
  NoContactReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const double L = traj.states.empty() ? 1.0 : traj.states.front().b.grid.L;
  for (const auto& d : traj.diagnostics) {
    if (!(d.min_b > 0.0)) {
      rep.all_positive_b = false;
      rep.margin.push_back(-std::numeric_limits<double>::infinity());
      ++rep.violations;
      continue;
    }
    const double bound = d_min(d.l1_inv_b, d.h2_norm, L);
    const double margin = bound - d.sup_inv_b;
    rep.margin.push_back(margin);
    rep.min_margin = std::min(rep.min_margin, margin);
    if (!(margin >= 0.0)) ++rep.violations;
  }
  return rep;
}

}  // namespace bf
