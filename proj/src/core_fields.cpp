#include "beamfluid/core_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamfluid/errors.hpp"
#include "beamfluid/kernels.hpp"
#include "fft.hpp"

namespace bf {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double wavenumber(std::size_t m, double L) {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / L;
}

// Factor (i k)^order applied per half-spectrum mode; odd orders drop Nyquist.
std::complex<double> derivative_factor(std::size_t m, std::size_t n, double L, int order) {
  if (order == 0) return {1.0, 0.0};
  if (m == n / 2 && order % 2 == 1) return {0.0, 0.0};
  const double k = wavenumber(m, L);
  std::complex<double> f{1.0, 0.0};
  for (int i = 0; i < order; ++i) f *= std::complex<double>(0.0, k);
  return f;
}

}  // namespace

PeriodicGrid1D::PeriodicGrid1D(double length, std::size_t n_) : L(length), n(n_) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("grid length must be positive");
  if (n < 8) throw InvalidArgument("grid needs n >= 8 samples");
  if (!is_power_of_two(n)) throw InvalidArgument("grid size must be a power of two");
}

bool operator==(const PeriodicGrid1D& a, const PeriodicGrid1D& b) {
  return a.L == b.L && a.n == b.n;
}

ScalarField1D::ScalarField1D(PeriodicGrid1D g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n) throw InvalidArgument("field length does not match grid");
}

ScalarField1D::ScalarField1D(PeriodicGrid1D g) : grid(g), values(g.n, 0.0) {}

ScalarField1D ScalarField1D::from_function(const PeriodicGrid1D& grid,
                                           const std::function<double(double)>& f) {
  std::vector<double> v(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) v[j] = f(grid.x(j));
  return {grid, std::move(v)};
}

ScalarField1D ScalarField1D::constant(const PeriodicGrid1D& grid, double c) {
  return {grid, std::vector<double>(grid.n, c)};
}

double ScalarField1D::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField1D::max() const { return *std::max_element(values.begin(), values.end()); }

double ScalarField1D::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField1D::finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ScalarField1D operator+(const ScalarField1D& a, const ScalarField1D& b) {
  ScalarField1D r = a;
  kernels::axpy(1.0, b.values.data(), r.values.data(), r.size());
  return r;
}

ScalarField1D operator-(const ScalarField1D& a, const ScalarField1D& b) {
  ScalarField1D r = a;
  kernels::axpy(-1.0, b.values.data(), r.values.data(), r.size());
  return r;
}

ScalarField1D operator*(double s, const ScalarField1D& a) {
  ScalarField1D r = a;
  for (double& v : r.values) v *= s;
  return r;
}

ScalarField1D derivative(const ScalarField1D& f, int order) {
  if (order < 0 || order > 4) throw InvalidArgument("derivative order must be in 0..4");
  if (!f.finite()) throw InvalidArgument("derivative of a non-finite field");
  if (order == 0) return f;
  const std::size_t n = f.grid.n;
  auto c = fft::forward(f.values);
  std::vector<double> re(c.size()), im(c.size());
  // Multiply by (ik)^order: a real factor times i^order.
  std::vector<double> mag(c.size());
  for (std::size_t m = 0; m < c.size(); ++m) mag[m] = std::abs(derivative_factor(m, n, f.grid.L, order));
  kernels::scale_complex(c.data(), mag.data(), c.size());
  const std::complex<double> phase = std::pow(std::complex<double>(0.0, 1.0), order);
  for (auto& v : c) v *= phase;
  return {f.grid, fft::inverse(c, n)};
}

double integrate(const ScalarField1D& f) { return f.grid.spacing() * kernels::sum(f.values.data(), f.size()); }

double mean(const ScalarField1D& f) { return kernels::sum(f.values.data(), f.size()) / static_cast<double>(f.size()); }

ScalarField1D project_zero_mean(const ScalarField1D& f) {
  ScalarField1D r = f;
  const double m = mean(f);
  for (double& v : r.values) v -= m;
  return r;
}

double l2_norm(const ScalarField1D& f) {
  return std::sqrt(f.grid.spacing() * kernels::sum_squares(f.values.data(), f.size()));
}

double l2_inner(const ScalarField1D& a, const ScalarField1D& b) {
  return a.grid.spacing() * kernels::dot(a.values.data(), b.values.data(), a.size());
}

double sobolev_norm(const ScalarField1D& f, int m) {
  if (m < 0 || m > 3) throw InvalidArgument("sobolev order must be in 0..3");
  const std::size_t n = f.grid.n;
  const auto c = fft::forward(f.values);
  std::vector<double> power(c.size()), weight(c.size());
  for (std::size_t q = 0; q < c.size(); ++q) {
    power[q] = std::norm(c[q]);
    double w = 0.0;
    for (int k = 0; k <= m; ++k) w += std::norm(derivative_factor(q, n, f.grid.L, k));
    // interior modes stand for the +/- pair
    const bool paired = q != 0 && q != n / 2;
    weight[q] = paired ? 2.0 * w : w;
  }
  const double s = kernels::dot(power.data(), weight.data(), c.size());
  return std::sqrt(f.grid.L * s) / static_cast<double>(n);
}

double sobolev_norm_fractional(const ScalarField1D& f, double s) {
  const std::size_t n = f.grid.n;
  const auto c = fft::forward(f.values);
  double acc = 0.0;
  for (std::size_t q = 0; q < c.size(); ++q) {
    const double k = wavenumber(q, f.grid.L);
    const bool paired = q != 0 && q != n / 2;
    acc += (paired ? 2.0 : 1.0) * std::pow(1.0 + k * k, s) * std::norm(c[q]);
  }
  return std::sqrt(f.grid.L * acc) / static_cast<double>(n);
}

double TrigSeries::wavenumber(int m) const { return 2.0 * std::numbers::pi * m / L; }

double TrigSeries::evaluate(double x, int order) const {
  const int N = max_mode();
  double acc = 0.0;
  for (int m = -N; m <= N; ++m) {
    const std::complex<double> cm = coeff(m);
    if (cm == 0.0) continue;
    const double k = wavenumber(m);
    std::complex<double> f = cm * std::polar(1.0, k * x);
    for (int i = 0; i < order; ++i) f *= std::complex<double>(0.0, k);
    acc += f.real();
  }
  return acc;
}

TrigSeries trig_series(const ScalarField1D& f) {
  const std::size_t n = f.grid.n;
  const int N = static_cast<int>(n / 2);
  const auto c = fft::forward(f.values);
  TrigSeries s;
  s.L = f.grid.L;
  s.c.assign(n + 1, {0.0, 0.0});
  const double inv = 1.0 / static_cast<double>(n);
  for (int m = 0; m <= N; ++m) {
    std::complex<double> cm = c[static_cast<std::size_t>(m)] * inv;
    if (m == N) cm *= 0.5;
    s.c[static_cast<std::size_t>(N + m)] = cm;
    if (m != 0) s.c[static_cast<std::size_t>(N - m)] = std::conj(cm);
  }
  return s;
}

ScalarField1D resample(const ScalarField1D& f, std::size_t n_new) {
  const std::size_t n = f.grid.n;
  if (n_new < n) throw InvalidArgument("resample only refines");
  const PeriodicGrid1D g(f.grid.L, n_new);
  const auto c = fft::forward(f.values);
  std::vector<std::complex<double>> d(n_new / 2 + 1, {0.0, 0.0});
  const double scale = static_cast<double>(n_new) / static_cast<double>(n);
  for (std::size_t m = 0; m < c.size(); ++m) d[m] = c[m] * scale;
  // the Nyquist pair of the coarse grid becomes an ordinary cosine mode
  if (n_new > n) d[n / 2] = std::complex<double>(c[n / 2].real() * 0.5 * scale, 0.0);
  return {g, fft::inverse(d, n_new)};
}

ScalarField1D shifted(const ScalarField1D& f, double s) {
  const std::size_t n = f.grid.n;
  auto c = fft::forward(f.values);
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double k = wavenumber(m, f.grid.L);
    if (m == n / 2)
      c[m] *= std::cos(k * s);
    else
      c[m] *= std::polar(1.0, k * s);
  }
  return {f.grid, fft::inverse(c, n)};
}

ReferenceGrid2D::ReferenceGrid2D(PeriodicGrid1D gx, std::size_t nz) : grid_x(gx), n_z(nz) {
  if (n_z < 8) throw InvalidArgument("reference grid needs n_z >= 8");
}

ScalarField2D::ScalarField2D(ReferenceGrid2D g, Lattice lat)
    : grid(g), lattice(lat), values(g.nx() * (lat.half_z ? g.n_z - 1 : g.n_z), 0.0) {}

ScalarField2D::ScalarField2D(ReferenceGrid2D g, std::vector<double> v, Lattice lat)
    : grid(g), lattice(lat), values(std::move(v)) {
  if (values.size() != nx() * nz()) throw InvalidArgument("2D field size does not match lattice");
}

double ScalarField2D::x(std::size_t j) const {
  return grid.grid_x.x(j) + (lattice.half_x ? 0.5 * grid.grid_x.spacing() : 0.0);
}

double ScalarField2D::z(std::size_t k) const {
  return grid.z(k) + (lattice.half_z ? 0.5 * grid.dz() : 0.0);
}

ScalarField2D ScalarField2D::from_function(const ReferenceGrid2D& grid,
                                           const std::function<double(double, double)>& f,
                                           Lattice lattice) {
  ScalarField2D r(grid, lattice);
  for (std::size_t j = 0; j < r.nx(); ++j)
    for (std::size_t k = 0; k < r.nz(); ++k) r(j, k) = f(r.x(j), r.z(k));
  return r;
}

double ScalarField2D::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField2D::finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

VectorField2D zero_vector_field(const ReferenceGrid2D& grid) {
  return {ScalarField2D(grid), ScalarField2D(grid)};
}

namespace {

template <class F>
ScalarField2D map_x_lines(const ScalarField2D& f, Lattice target, F&& op) {
  ScalarField2D r(f.grid, target);
  const std::size_t nx = f.nx(), nz = f.nz();
  ScalarField1D line(f.grid.grid_x);
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < nx; ++j) line[j] = f(j, k);
    const ScalarField1D out = op(line);
    for (std::size_t j = 0; j < nx; ++j) r(j, k) = out[j];
  }
  return r;
}

}  // namespace

ScalarField2D dx(const ScalarField2D& f, int order) {
  return map_x_lines(f, f.lattice, [order](const ScalarField1D& l) { return derivative(l, order); });
}

ScalarField2D shifted_x(const ScalarField2D& f, double s, Lattice target) {
  return map_x_lines(f, target, [s](const ScalarField1D& l) { return shifted(l, s); });
}

ScalarField2D dz(const ScalarField2D& f) {
  ScalarField2D r(f.grid, f.lattice);
  const std::size_t nz = f.nz();
  const double h = f.grid.dz();
  for (std::size_t j = 0; j < f.nx(); ++j) {
    r(j, 0) = (-3.0 * f(j, 0) + 4.0 * f(j, 1) - f(j, 2)) / (2.0 * h);
    for (std::size_t k = 1; k + 1 < nz; ++k) r(j, k) = (f(j, k + 1) - f(j, k - 1)) / (2.0 * h);
    r(j, nz - 1) = (3.0 * f(j, nz - 1) - 4.0 * f(j, nz - 2) + f(j, nz - 3)) / (2.0 * h);
  }
  return r;
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

double integrate(const ScalarField2D& f) {
  const std::size_t nz = f.nz();
  const std::vector<double> w =
      f.lattice.half_z ? std::vector<double>(nz, f.grid.dz()) : trapezoid_weights(nz, f.grid.dz());
  double acc = 0.0;
  for (std::size_t j = 0; j < f.nx(); ++j) acc += kernels::dot(&f.values[j * nz], w.data(), nz);
  return acc * f.grid.grid_x.spacing();
}

double l2_norm(const ScalarField2D& f) {
  const std::size_t nz = f.nz();
  const std::vector<double> w =
      f.lattice.half_z ? std::vector<double>(nz, f.grid.dz()) : trapezoid_weights(nz, f.grid.dz());
  double acc = 0.0;
  for (std::size_t j = 0; j < f.nx(); ++j)
    acc += kernels::weighted_sum_squares(w.data(), &f.values[j * nz], nz);
  return std::sqrt(acc * f.grid.grid_x.spacing());
}

}  // namespace bf
