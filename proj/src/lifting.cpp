#include "beamfluid/lifting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "beamfluid/errors.hpp"
#include "fft.hpp"

namespace bf {

namespace {

using cplx = std::complex<double>;
constexpr std::size_t kJetSize = 12;
using JetCoeffs = std::array<cplx, kJetSize>;

double falling(int p, int order) {
  double f = 1.0;
  for (int i = 0; i < order; ++i) f *= static_cast<double>(p - i);
  return f;
}

constexpr std::array<double LiftJet::*, kJetSize> kJetMembers{
    &LiftJet::u1,   &LiftJet::u2,   &LiftJet::u1x,  &LiftJet::u1y,  &LiftJet::u2x,  &LiftJet::u2y,
    &LiftJet::u1xx, &LiftJet::u1xy, &LiftJet::u1yy, &LiftJet::u2xx, &LiftJet::u2xy, &LiftJet::u2yy};

LiftJet to_jet(const std::array<double, kJetSize>& v) {
  LiftJet j;
  for (std::size_t i = 0; i < kJetSize; ++i) j.*kJetMembers[i] = v[i];
  return j;
}

// Per-mode contributions to (u1, u2, u1x, u1y, u2x, u2y, u1xx, u1xy, u1yy,
// u2xx, u2xy, u2yy) before the factor e^{ikx}.
JetCoeffs mode_coeffs(cplx c, double k, int m, double zeta, double lambda, const std::vector<double>& q) {
  const double s = 2.0 * std::abs(m);
  const double t = s * zeta;
  const double Q0 = lift_polynomial(q, t, 0), Q1 = lift_polynomial(q, t, 1);
  const double Q2 = lift_polynomial(q, t, 2), Q3 = lift_polynomial(q, t, 3);
  const cplx ik(0.0, k);
  const cplx a = c / ik;
  const double l1 = 1.0 / lambda, l2 = l1 * l1, l3 = l2 * l1;
  return {a * s * Q1 * l1,      c * Q0,          c * s * Q1 * l1,      -a * s * s * Q2 * l2,
          c * ik * Q0,          -c * s * Q1 * l1, c * ik * s * Q1 * l1, -c * s * s * Q2 * l2,
          a * s * s * s * Q3 * l3, -c * k * k * Q0,  -c * ik * s * Q1 * l1, c * s * s * Q2 * l2};
}

}  // namespace

double lift_polynomial(const std::vector<double>& c, double t, int order) {
  if (t >= 1.0) return 0.0;
  double acc = 0.0;
  for (int p = static_cast<int>(c.size()) - 1; p >= order; --p) acc = acc * t + c[static_cast<std::size_t>(p)] * falling(p, order);
  return acc;
}

std::vector<double> lift_polynomial_coefficients(int k) {
  if (k < 2) throw InvalidArgument("lift smoothness order k must be >= 2");
  const int n = k + 5;  // three conditions at 0, k + 2 at 1
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  int row = 0;
  for (int d = 0; d < 3; ++d, ++row) {
    A(row, d) = falling(d, d);
    b[row] = d == 0 ? 1.0 : 0.0;
  }
  for (int d = 0; d <= k + 1; ++d, ++row)
    for (int p = d; p < n; ++p) A(row, p) = falling(p, d);
  const Eigen::VectorXd x = A.fullPivLu().solve(b);
  std::vector<double> c(x.data(), x.data() + n);
  auto value = [&c](double t, int order) {
    double acc = 0.0;
    for (int p = static_cast<int>(c.size()) - 1; p >= order; --p) acc = acc * t + c[static_cast<std::size_t>(p)] * falling(p, order);
    return acc;
  };
  bool ok = std::abs(value(0.0, 0) - 1.0) < 1e-12 && std::abs(value(0.0, 1)) < 1e-12 && std::abs(value(0.0, 2)) < 1e-12;
  for (int d = 0; d <= k + 1; ++d) ok = ok && std::abs(value(1.0, d)) < 1e-9;
  if (!ok) throw SolverError("lift polynomial conditions not met after solve");
  return c;
}

LiftConfig make_lift_config(const DeformationMap& map, int k) {
  LiftConfig cfg{k, lift_polynomial_coefficients(k), 1.0 / (2.0 * map.r0)};
  if (!(cfg.lambda <= 0.5 * map.min_h)) throw GeometryError("lift strip height exceeds min h / 2");
  return cfg;
}

LiftOperator::LiftOperator(const ScalarField1D& etadot, const LiftConfig& cfg)
    : etadot_(etadot), series_(trig_series(etadot)), q_(cfg.Q_coeffs), lambda_(cfg.lambda) {
  if (!(lambda_ > 0.0)) throw InvalidArgument("lift strip height must be > 0");
  if (q_.empty()) q_ = lift_polynomial_coefficients(cfg.k);
  if (std::abs(integrate(etadot)) > 1e-10 * std::max(1.0, etadot.max_abs()))
    throw InvalidData("lift boundary data must have zero mean");
}

LiftJet LiftOperator::strip(double x, double y) const {
  const double zeta = (lambda_ - y) / lambda_;
  std::array<double, kJetSize> acc{};
  const int N = series_.max_mode();
  for (int m = -N; m <= N; ++m) {
    if (m == 0) continue;
    const cplx c = series_.coeff(m);
    if (c == 0.0) continue;
    const double k = series_.wavenumber(m);
    const JetCoeffs mc = mode_coeffs(c, k, m, zeta, lambda_, q_);
    const cplx e = std::polar(1.0, k * x);
    for (std::size_t i = 0; i < kJetSize; ++i) acc[i] += (mc[i] * e).real();
  }
  return to_jet(acc);
}

LiftJet LiftOperator::evaluate(double x, double y) const {
  if (y < lambda_) return strip(x, y);
  LiftJet j;
  j.u2 = series_.evaluate(x, 0);
  j.u2x = series_.evaluate(x, 1);
  j.u2xx = series_.evaluate(x, 2);
  return j;
}

std::vector<LiftJet> LiftOperator::line(double y, double shift) const {
  const std::size_t n = etadot_.size();
  const int N = static_cast<int>(n / 2);
  const double zeta = (lambda_ - y) / lambda_;
  const double nd = static_cast<double>(n);
  std::array<std::vector<cplx>, kJetSize> bins;
  for (auto& b : bins) b.assign(n / 2 + 1, cplx(0.0, 0.0));
  for (int m = -N; m <= N; ++m) {
    if (m == 0) continue;
    const cplx c = series_.coeff(m);
    if (c == 0.0) continue;
    const double k = series_.wavenumber(m);
    const JetCoeffs mc = mode_coeffs(c, k, m, zeta, lambda_, q_);
    const cplx e = std::polar(nd, k * shift);
    const std::size_t bin = static_cast<std::size_t>(std::abs(m));
    for (std::size_t i = 0; i < kJetSize; ++i) {
      if (m == N || m == -N)
        bins[i][bin] += (mc[i] * e).real();
      else if (m > 0)
        bins[i][bin] += mc[i] * e;
    }
  }
  std::vector<LiftJet> out(n);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < kJetSize; ++i) {
    fft::inverse(bins[i].data(), n, vals.data());
    for (std::size_t j = 0; j < n; ++j) out[j].*kJetMembers[i] = vals[j];
  }
  return out;
}

std::vector<double> LiftOperator::kink_heights() const {
  std::vector<double> y;
  const int N = series_.max_mode();
  for (int m = 1; m <= N; ++m) {
    if (series_.coeff(m) == 0.0 && series_.coeff(-m) == 0.0) continue;
    y.push_back(lambda_ * (1.0 - 1.0 / (2.0 * m)));
  }
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  return y;
}

VectorField2D build_lift(const DeformationMap& map, const ScalarField1D& etadot, const LiftConfig& cfg,
                         std::size_t n_z, Lattice lat1, Lattice lat2) {
  if (!(etadot.grid == map.grid())) throw InvalidArgument("etadot and the deformation must share a grid");
  if (!(cfg.lambda <= 0.5 * map.min_h)) throw GeometryError("lift strip height exceeds min h / 2");
  const LiftOperator op(etadot, cfg);
  const ReferenceGrid2D grid(map.grid(), n_z);
  VectorField2D u{ScalarField2D(grid, lat1), ScalarField2D(grid, lat2)};
  const double half = 0.5 * map.grid().spacing();
  const ScalarField1D etadot_half = shifted(etadot, half);
  auto fill = [&](ScalarField2D& f, bool first) {
    const ScalarField1D& h = f.lattice.half_x ? map.h_half : map.h;
    const ScalarField1D& top = f.lattice.half_x ? etadot_half : etadot;
    for (std::size_t j = 0; j < f.nx(); ++j)
      for (std::size_t k = 0; k < f.nz(); ++k) {
        const double y = h[j] * f.z(k);
        if (y >= op.lambda()) {
          f(j, k) = first ? 0.0 : top[j];
        } else {
          const LiftJet jet = op.evaluate(f.x(j), y);
          f(j, k) = first ? jet.u1 : jet.u2;
        }
      }
  };
  fill(u.c1, true);
  fill(u.c2, false);
  return u;
}

std::array<double, 3> lift_sobolev_norms(const LiftOperator& op, const DeformationMap& map) {
  const double lambda = op.lambda();
  const auto& g = map.grid();
  const double dx = g.spacing();
  std::array<double, 3> acc{};
  // strip part: Gauss-Legendre between consecutive kinks
  std::vector<double> cuts{0.0};
  for (double y : op.kink_heights())
    if (y > 0.0 && y < lambda) cuts.push_back(y);
  cuts.push_back(lambda);
  using Gauss = boost::math::quadrature::gauss<double, 8>;
  std::vector<std::pair<double, double>> nodes;  // (t in (-1,1), weight)
  for (std::size_t i = 0; i < Gauss::abscissa().size(); ++i) {
    nodes.emplace_back(Gauss::abscissa()[i], Gauss::weights()[i]);
    nodes.emplace_back(-Gauss::abscissa()[i], Gauss::weights()[i]);
  }
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    for (const auto& [t, w] : nodes) {
      const double y = 0.5 * (a + b) + 0.5 * (b - a) * t;
      const double wy = 0.5 * (b - a) * w * dx;
      for (const LiftJet& q : op.line(y)) {
        acc[0] += wy * (q.u1 * q.u1 + q.u2 * q.u2);
        acc[1] += wy * (q.u1x * q.u1x + q.u1y * q.u1y + q.u2x * q.u2x + q.u2y * q.u2y);
        acc[2] += wy * (q.u1xx * q.u1xx + 2.0 * q.u1xy * q.u1xy + q.u1yy * q.u1yy + q.u2xx * q.u2xx +
                        2.0 * q.u2xy * q.u2xy + q.u2yy * q.u2yy);
      }
    }
  }
  // above the strip U = (0, etadot(x)) is constant in y
  const ScalarField1D e1 = derivative(op.etadot(), 1), e2 = derivative(op.etadot(), 2);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double w = (map.h[j] - lambda) * dx;
    acc[0] += w * op.etadot()[j] * op.etadot()[j];
    acc[1] += w * e1[j] * e1[j];
    acc[2] += w * e2[j] * e2[j];
  }
  return {std::sqrt(acc[0]), std::sqrt(acc[0] + acc[1]), std::sqrt(acc[0] + acc[1] + acc[2])};
}

double lift_divergence_sup(const LiftOperator& op, std::size_t n_lines) {
  const PeriodicGrid1D& g = op.etadot().grid;
  double sup = 0.0;
  for (std::size_t l = 0; l <= n_lines; ++l) {
    const double y = op.lambda() * static_cast<double>(l) / static_cast<double>(n_lines);
    const std::vector<LiftJet> jets = op.line(y);
    ScalarField1D u1(g);
    for (std::size_t j = 0; j < g.n; ++j) u1[j] = jets[j].u1;
    const ScalarField1D u1x = derivative(u1, 1);
    for (std::size_t j = 0; j < g.n; ++j) sup = std::max(sup, std::abs(u1x[j] + jets[j].u2y));
  }
  return sup;
}

LiftInterfaceReport lift_interface_matching(const LiftOperator& op) {
  const std::vector<LiftJet> below = op.line(op.lambda());
  const PeriodicGrid1D& g = op.etadot().grid;
  LiftInterfaceReport r;
  for (std::size_t j = 0; j < g.n; ++j) {
    const LiftJet& b = below[j];
    // above: (0, etadot) with vanishing y-derivatives
    r.value_mismatch = std::max({r.value_mismatch, std::abs(b.u1), std::abs(b.u2 - op.etadot()[j])});
    r.derivative_mismatch = std::max({r.derivative_mismatch, std::abs(b.u1y), std::abs(b.u2y)});
  }
  return r;
}

void LiftContinuityReport::merge(const LiftContinuityReport& o) {
  samples.insert(samples.end(), o.samples.begin(), o.samples.end());
  for (int m = 0; m < 3; ++m) max_ratio[m] = std::max(max_ratio[m], o.max_ratio[m]);
  for (const auto& [b, v] : o.bucket_max) {
    auto& mine = bucket_max[b];
    for (int m = 0; m < 3; ++m) mine[m] = std::max(mine[m], v[m]);
  }
  all_finite = all_finite && o.all_finite;
}

LiftContinuityReport lift_continuity_report(const DeformationMap& map, const std::vector<ScalarField1D>& etadots,
                                            int k) {
  const LiftConfig cfg = make_lift_config(map, k);
  LiftContinuityReport rep;
  const int bucket = static_cast<int>(std::floor(map.r0));
  for (const auto& e : etadots) {
    const LiftOperator op(e, cfg);
    const auto u = lift_sobolev_norms(op, map);
    LiftContinuityReport::Sample s{map.r0, {}};
    for (int m = 0; m < 3; ++m) {
      const double d = sobolev_norm(e, m);
      s.ratio[m] = d > 0.0 ? u[m] / d : 0.0;
      if (!std::isfinite(s.ratio[m])) rep.all_finite = false;
      rep.max_ratio[m] = std::max(rep.max_ratio[m], s.ratio[m]);
      auto& b = rep.bucket_max[bucket];
      b[m] = std::max(b[m], s.ratio[m]);
    }
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace bf
