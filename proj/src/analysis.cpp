#include "beamfluid/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <string>

#include "beamfluid/errors.hpp"

namespace bf {

namespace {

constexpr std::size_t kOversample = 8;

void require_positive(const ScalarField1D& eta, const char* what) {
  if (!eta.finite()) throw InvalidArgument(std::string(what) + " is not finite");
  if (!(eta.min() > 0.0)) throw DomainError(std::string(what) + " must be strictly positive");
}

// Maximum over the period of g(x) built from trigonometric series: scan the
// oversampled samples, then polish every near-maximal local peak with Brent.
template <class G>
double continuum_max(const std::vector<double>& samples, double L, G&& g, double rel_cut = 1e-3) {
  const std::size_t m = samples.size();
  const double h = L / static_cast<double>(m);
  const double best_sample = *std::max_element(samples.begin(), samples.end());
  double best = best_sample;
  const double cut = best_sample - rel_cut * std::max(1.0, std::abs(best_sample));
  int polished = 0;
  for (std::size_t i = 0; i < m && polished < 16; ++i) {
    const double v = samples[i];
    if (v < cut || v < samples[(i + m - 1) % m] || v < samples[(i + 1) % m]) continue;
    const double x0 = h * static_cast<double>(i);
    auto neg = [&](double x) { return -g(x); };
    const auto r = boost::math::tools::brent_find_minima(neg, x0 - h, x0 + h, 52);
    best = std::max(best, -r.second);
    ++polished;
  }
  return best;
}

}  // namespace

double sup_norm(const ScalarField1D& f) {
  const ScalarField1D fine = resample(f, kOversample * f.grid.n);
  const TrigSeries s = trig_series(f);
  std::vector<double> a(fine.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(fine[i]);
  return continuum_max(a, f.grid.L, [&](double x) { return std::abs(s.evaluate(x)); });
}

A1Result inequality_A1_ratio(const ScalarField1D& eta, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5) || alpha == 0.25)
    throw InvalidArgument("alpha must lie in (0, 1/2) and differ from 1/4");
  require_positive(eta, "eta");
  const ScalarField1D ex = derivative(eta, 1);
  ScalarField1D integrand(eta.grid);
  for (std::size_t j = 0; j < eta.size(); ++j) {
    const double g2 = ex[j] * ex[j];
    integrand[j] = g2 * g2 / std::pow(eta[j], 4.0 * alpha);
  }
  A1Result r;
  r.lhs = integrate(integrand);
  const double exx = l2_norm(derivative(eta, 2));
  r.rhs_core = exx * exx * std::pow(sup_norm(eta), 2.0 * (1.0 - 2.0 * alpha));
  r.ratio = r.rhs_core > 0.0 ? r.lhs / r.rhs_core : 0.0;
  return r;
}

A2Result pointwise_gradient_bounds(const ScalarField1D& eta) {
  require_positive(eta, "eta");
  const ScalarField1D ex = derivative(eta, 1);
  const double n2 = l2_norm(derivative(eta, 2));
  const double n3 = l2_norm(derivative(eta, 3));
  A2Result r;
  if (n3 == 0.0) return r;
  const std::size_t m = kOversample * eta.grid.n;
  const ScalarField1D eta_f = resample(eta, m), ex_f = resample(ex, m);
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = ex_f[i] * ex_f[i] / eta_f[i];
  const TrigSeries se = trig_series(eta);
  const double sup = continuum_max(g, eta.grid.L, [&](double x) {
    const double d = se.evaluate(x, 1);
    return d * d / se.evaluate(x, 0);
  });
  r.ratio_1 = sup / (std::sqrt(n2) * std::sqrt(n3));
  r.ratio_2 = sup / n3;
  return r;
}

double phi_sigma(double sigma, double L) {
  if (!(sigma >= 0.0) || !(L > 0.0)) throw InvalidArgument("phi needs sigma >= 0 and L > 0");
  const double upper = L * sigma;
  if (upper == 0.0) return 0.0;
  auto f = [](double z) { return 1.0 / (1.0 + z * std::sqrt(z)); };
  double err = 0.0;
  // the substitution z = t^2 removes the sqrt singularity of the derivative
  auto g = [&](double t) { return 2.0 * t * f(t * t); };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, std::sqrt(upper), 20,
                                                                                   1e-13, &err);
  return v;
}

double d_min(double l1_inv, double h2, double L) {
  if (!(l1_inv > 0.0) || !std::isfinite(l1_inv)) throw InvalidArgument("d_min needs l1_inv > 0");
  if (!(h2 >= 0.0) || !std::isfinite(h2)) throw InvalidArgument("d_min needs h2 >= 0");
  if (h2 == 0.0) return l1_inv / L;
  const double phi = phi_sigma(std::cbrt((h2 * l1_inv / L) * (h2 * l1_inv / L)), L);
  return h2 * h2 * l1_inv * l1_inv * l1_inv / (phi * phi * phi);
}

double chi0(double z, int order) {
  switch (order) {
    case 0: return z * z * (3.0 - 2.0 * z);
    case 1: return 6.0 * z * (1.0 - z);
    case 2: return 6.0 - 12.0 * z;
    case 3: return -12.0;
    default:
      if (order > 3) return 0.0;
      throw InvalidArgument("chi0 derivative order must be >= 0");
  }
}

StreamValues stream_values(const HeightJet& a, double y) {
  const double h = a.h, z = y / h;
  const double c0 = chi0(z), c1 = chi0(z, 1), c2 = chi0(z, 2), c3 = chi0(z, 3);
  StreamValues s{};
  s.psi = a.hx * c0;
  s.psi_x = a.hxx * c0 - a.hx * a.hx * y / (h * h) * c1;
  s.psi_y = a.hx / h * c1;
  s.psi_t = a.hxt * c0 - a.hx * a.ht * y / (h * h) * c1;
  s.psi_xx = a.hxxx * c0 - 3.0 * y * a.hxx * a.hx / (h * h) * c1 +
             a.hx * a.hx * a.hx * y * y / (h * h * h * h) * c2;
  s.psi_xy = (a.hxx / h - a.hx * a.hx / (h * h)) * c1 - a.hx * a.hx * y / (h * h * h) * c2;
  s.psi_yy = a.hx / (h * h) * c2;
  s.psi_yyy = a.hx / (h * h * h) * c3;
  return s;
}

HeightJet StreamFunction::jet_at_node(std::size_t j) const {
  return {state.h[j], hx[j], hxx[j], hxxx[j], state.hdot[j], hxt[j]};
}

HeightJet StreamFunction::jet_at(double x) const {
  return {h_series.evaluate(x, 0), h_series.evaluate(x, 1), h_series.evaluate(x, 2),
          h_series.evaluate(x, 3), ht_series.evaluate(x, 0), ht_series.evaluate(x, 1)};
}

double StreamFunction::psi(double x, double y) const { return stream_values(jet_at(x), y).psi; }

std::array<double, 2> StreamFunction::w(double x, double y) const {
  const StreamValues s = stream_values(jet_at(x), y);
  return {-s.psi_y, s.psi_x};
}

double StreamFunction::q(double x, double y) const {
  const HeightJet a = jet_at(x);
  const double h0 = state.h[0];
  return 6.0 * (1.0 / (h0 * h0) - 1.0 / (a.h * a.h)) + stream_values(a, y).psi_xy;
}

StreamFunction build_stream_function(const BeamState& state) {
  if (!(state.h.min() > 0.0))
    throw ContactError("stream function needs h > 0, min h = " + std::to_string(state.h.min()), state.t);
  StreamFunction sf{state,
                    ScalarField1D(state.h.grid),
                    derivative(state.h, 1),
                    derivative(state.h, 2),
                    derivative(state.h, 3),
                    derivative(state.hdot, 1),
                    trig_series(state.h),
                    trig_series(state.hdot)};
  const double h0 = state.h[0];
  for (std::size_t j = 0; j < state.h.size(); ++j)
    sf.qs[j] = 6.0 * (1.0 / (h0 * h0) - 1.0 / (state.h[j] * state.h[j]));
  return sf;
}

namespace {

struct FixedTimeSides {
  double grad_ratio = 0.0;
  double dy_l2 = 0.0, dx_l2 = 0.0, dt_sq = 0.0, dxx_sq = 0.0;
  double rhs_dy = 0.0, rhs_dx = 0.0, rhs_dt_sq = 0.0, rhs_dxx_sq = 0.0;
  double max_grad = 0.0, max_grad_rhs = 0.0;
};

// max over the fibre of |grad psi| / (|h_xx| + |h_x| / h + h_x^2 / h)
double fibre_grad_ratio(const HeightJet& a) {
  const double rhs = std::abs(a.hxx) + std::abs(a.hx) / a.h + a.hx * a.hx / a.h;
  if (!(rhs > 0.0)) return 0.0;
  auto ratio = [&](double z) {
    const StreamValues v = stream_values(a, a.h * z);
    return std::hypot(v.psi_x, v.psi_y) / rhs;
  };
  constexpr int n_levels = 32;
  int kbest = 0;
  double best = ratio(0.0);
  for (int k = 1; k <= n_levels; ++k) {
    const double v = ratio(static_cast<double>(k) / n_levels);
    if (v > best) best = v, kbest = k;
  }
  const double lo = std::max(0, kbest - 1) / static_cast<double>(n_levels);
  const double hi = std::min(n_levels, kbest + 1) / static_cast<double>(n_levels);
  const auto r = boost::math::tools::brent_find_minima([&](double z) { return -ratio(z); }, lo, hi, 52);
  return std::max(best, -r.second);
}

FixedTimeSides fixed_time_sides(const BeamState& s) {
  const StreamFunction sf = build_stream_function(s);
  const auto& g = s.h.grid;
  const std::size_t nx = g.n;
  constexpr std::size_t n_gauss = 12;
  using Gauss = boost::math::quadrature::gauss<double, n_gauss>;
  // abscissae on (-1, 1) stored for the non-negative half
  std::vector<double> zq, wq;
  for (std::size_t i = 0; i < Gauss::abscissa().size(); ++i) {
    const double a = Gauss::abscissa()[i], w = Gauss::weights()[i];
    zq.push_back(0.5 * (1.0 + a));
    wq.push_back(0.5 * w);
    if (a != 0.0) {
      zq.push_back(0.5 * (1.0 - a));
      wq.push_back(0.5 * w);
    }
  }
  constexpr std::size_t n_pointwise = 33;
  FixedTimeSides r;
  double dy2 = 0.0, dx2 = 0.0, dt2 = 0.0, dxx2 = 0.0, inv_h = 0.0;
  for (std::size_t j = 0; j < nx; ++j) {
    const HeightJet a = sf.jet_at_node(j);
    double cy = 0.0, cx = 0.0, ct = 0.0, cxx = 0.0;
    for (std::size_t q = 0; q < zq.size(); ++q) {
      const StreamValues v = stream_values(a, a.h * zq[q]);
      const double w = wq[q] * a.h;
      cy += w * v.psi_y * v.psi_y;
      cx += w * v.psi_x * v.psi_x;
      ct += w * v.psi_t * v.psi_t;
      cxx += w * v.psi_xx * v.psi_xx;
    }
    dy2 += cy;
    dx2 += cx;
    dt2 += ct;
    dxx2 += cxx;
    inv_h += 1.0 / a.h;
    const double rhs = std::abs(a.hxx) + std::abs(a.hx) / a.h + a.hx * a.hx / a.h;
    for (std::size_t k = 0; k < n_pointwise; ++k) {
      const double y = a.h * static_cast<double>(k) / static_cast<double>(n_pointwise - 1);
      const StreamValues v = stream_values(a, y);
      r.max_grad = std::max(r.max_grad, std::hypot(v.psi_x, v.psi_y));
    }
    r.max_grad_rhs = std::max(r.max_grad_rhs, rhs);
  }
  {
    // the ratio peaks near inflection points of h, which the nodes miss
    const std::size_t m = kOversample * nx;
    const ScalarField1D fh = resample(s.h, m), fx = resample(sf.hx, m), fxx = resample(sf.hxx, m);
    std::vector<double> samples(m);
    for (std::size_t i = 0; i < m; ++i) samples[i] = fibre_grad_ratio({fh[i], fx[i], fxx[i], 0.0, 0.0, 0.0});
    r.grad_ratio = continuum_max(samples, g.L, [&](double x) { return fibre_grad_ratio(sf.jet_at(x)); }, 0.05);
  }
  const double dx = g.spacing();
  r.dy_l2 = std::sqrt(dy2 * dx);
  r.dx_l2 = std::sqrt(dx2 * dx);
  r.dt_sq = dt2 * dx;
  r.dxx_sq = dxx2 * dx;
  const double hinf = sup_norm(s.h);
  const double n_xx = l2_norm(sf.hxx), n_xxx = l2_norm(sf.hxxx);
  const double n_xt = l2_norm(sf.hxt), n_t = l2_norm(s.hdot);
  r.rhs_dy = std::pow(hinf, 0.25) * std::sqrt(n_xx) * std::pow(inv_h * dx, 0.25);
  r.rhs_dx = std::sqrt(hinf) * n_xx;
  r.rhs_dt_sq = hinf * n_xt * n_xt + n_t * n_t * n_xxx;
  r.rhs_dxx_sq = hinf * n_xxx * n_xxx + std::pow(n_xx, 1.5) * std::pow(n_xxx, 1.5);
  return r;
}

double safe_ratio(double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : 0.0; }

}  // namespace

StreamEstimateReport stream_norm_estimates(const std::vector<BeamState>& slice) {
  if (slice.empty()) throw InvalidArgument("stream_norm_estimates needs at least one state");
  StreamEstimateReport rep;
  std::vector<FixedTimeSides> sides;
  sides.reserve(slice.size());
  for (const auto& s : slice) sides.push_back(fixed_time_sides(s));
  for (const auto& f : sides) {
    rep.ratio[0] = std::max(rep.ratio[0], f.grad_ratio);
    rep.lhs[0] = std::max(rep.lhs[0], f.max_grad);
    rep.rhs[0] = std::max(rep.rhs[0], f.max_grad_rhs);
    const double r1 = safe_ratio(f.dy_l2, f.rhs_dy), r2 = safe_ratio(f.dx_l2, f.rhs_dx);
    if (r1 >= rep.ratio[1]) rep.lhs[1] = f.dy_l2, rep.rhs[1] = f.rhs_dy, rep.ratio[1] = r1;
    if (r2 >= rep.ratio[2]) rep.lhs[2] = f.dx_l2, rep.rhs[2] = f.rhs_dx, rep.ratio[2] = r2;
  }
  double lt = 0.0, rt = 0.0, lxx = 0.0, rxx = 0.0;
  if (slice.size() == 1) {
    lt = sides[0].dt_sq, rt = sides[0].rhs_dt_sq, lxx = sides[0].dxx_sq, rxx = sides[0].rhs_dxx_sq;
  } else {
    for (std::size_t i = 0; i + 1 < slice.size(); ++i) {
      const double w = 0.5 * (slice[i + 1].t - slice[i].t);
      lt += w * (sides[i].dt_sq + sides[i + 1].dt_sq);
      rt += w * (sides[i].rhs_dt_sq + sides[i + 1].rhs_dt_sq);
      lxx += w * (sides[i].dxx_sq + sides[i + 1].dxx_sq);
      rxx += w * (sides[i].rhs_dxx_sq + sides[i + 1].rhs_dxx_sq);
    }
  }
  rep.lhs[3] = std::sqrt(lt), rep.rhs[3] = std::sqrt(rt), rep.ratio[3] = safe_ratio(rep.lhs[3], rep.rhs[3]);
  rep.lhs[4] = std::sqrt(lxx), rep.rhs[4] = std::sqrt(rxx), rep.ratio[4] = safe_ratio(rep.lhs[4], rep.rhs[4]);
  return rep;
}

}  // namespace bf
