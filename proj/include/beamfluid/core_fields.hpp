#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace bf {

struct PeriodicGrid1D {
  PeriodicGrid1D(double length, std::size_t n);

  double spacing() const { return L / static_cast<double>(n); }
  double x(std::size_t j) const { return spacing() * static_cast<double>(j); }

  double L;
  std::size_t n;
};

bool operator==(const PeriodicGrid1D& a, const PeriodicGrid1D& b);

struct ScalarField1D {
  ScalarField1D(PeriodicGrid1D grid, std::vector<double> values);
  explicit ScalarField1D(PeriodicGrid1D grid);  // zeros

  static ScalarField1D from_function(const PeriodicGrid1D& grid,
                                     const std::function<double(double)>& f);
  static ScalarField1D constant(const PeriodicGrid1D& grid, double c);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double& operator[](std::size_t j) { return values[j]; }

  double min() const;
  double max() const;
  double max_abs() const;
  bool finite() const;

  PeriodicGrid1D grid;
  std::vector<double> values;
};

ScalarField1D operator+(const ScalarField1D& a, const ScalarField1D& b);
ScalarField1D operator-(const ScalarField1D& a, const ScalarField1D& b);
ScalarField1D operator*(double s, const ScalarField1D& a);

ScalarField1D derivative(const ScalarField1D& f, int order);
double integrate(const ScalarField1D& f);
double mean(const ScalarField1D& f);
ScalarField1D project_zero_mean(const ScalarField1D& f);
double sobolev_norm(const ScalarField1D& f, int m);
double l2_norm(const ScalarField1D& f);
double l2_inner(const ScalarField1D& a, const ScalarField1D& b);
// Spectral norm (sum (1+k^2)^s |c_k|^2 L)^(1/2) for real s, k = 2 pi m / L.
double sobolev_norm_fractional(const ScalarField1D& f, double s);

// Trigonometric interpolant: c[m + n/2] for m = -n/2..n/2, Nyquist split evenly
// so the series is real everywhere and matches the samples at the nodes.
struct TrigSeries {
  double L = 1.0;
  std::vector<std::complex<double>> c;
  int max_mode() const { return static_cast<int>(c.size() / 2); }
  std::complex<double> coeff(int m) const { return c[static_cast<std::size_t>(m + max_mode())]; }
  double wavenumber(int m) const;
  // order-th derivative at arbitrary x
  double evaluate(double x, int order = 0) const;
};

TrigSeries trig_series(const ScalarField1D& f);
// Trigonometric interpolant sampled on a finer grid of n_new points.
ScalarField1D resample(const ScalarField1D& f, std::size_t n_new);
// Samples of f(x_j + s), exact for band-limited fields.
ScalarField1D shifted(const ScalarField1D& f, double s);

struct ReferenceGrid2D {
  ReferenceGrid2D(PeriodicGrid1D grid_x, std::size_t n_z);

  double dz() const { return 1.0 / static_cast<double>(n_z - 1); }
  double z(std::size_t k) const { return dz() * static_cast<double>(k); }
  std::size_t nx() const { return grid_x.n; }

  PeriodicGrid1D grid_x;
  std::size_t n_z;
};

// Sample placement of a 2D field. Nodes: (x_j, z_k), k = 0..n_z-1.
// half_x shifts x by spacing/2; half_z uses cell centres z_{k+1/2}, k = 0..n_z-2.
struct Lattice {
  bool half_x = false;
  bool half_z = false;
};

struct ScalarField2D {
  ScalarField2D(ReferenceGrid2D grid, Lattice lattice = {});
  ScalarField2D(ReferenceGrid2D grid, std::vector<double> values, Lattice lattice = {});

  static ScalarField2D from_function(const ReferenceGrid2D& grid,
                                     const std::function<double(double, double)>& f,
                                     Lattice lattice = {});

  std::size_t nx() const { return grid.nx(); }
  std::size_t nz() const { return lattice.half_z ? grid.n_z - 1 : grid.n_z; }
  double x(std::size_t j) const;
  double z(std::size_t k) const;

  double operator()(std::size_t j, std::size_t k) const { return values[j * nz() + k]; }
  double& operator()(std::size_t j, std::size_t k) { return values[j * nz() + k]; }

  double max_abs() const;
  bool finite() const;

  ReferenceGrid2D grid;
  Lattice lattice;
  std::vector<double> values;
};

struct VectorField2D {
  ScalarField2D c1;
  ScalarField2D c2;
};

VectorField2D zero_vector_field(const ReferenceGrid2D& grid);

// Spectral x-derivative along each z-line.
ScalarField2D dx(const ScalarField2D& f, int order = 1);
// Second-order centred z-derivative, one-sided (second order) at the ends.
ScalarField2D dz(const ScalarField2D& f);
// Trapezoid in z (midpoint for cell-centred lattices) times L*mean in x.
double integrate(const ScalarField2D& f);
double l2_norm(const ScalarField2D& f);
// Fourier shift of every z-line by s (used to move between x lattices).
ScalarField2D shifted_x(const ScalarField2D& f, double s, Lattice target);

// Trapezoid weights for nodes z_0..z_{n-1} with spacing dz.
std::vector<double> trapezoid_weights(std::size_t n, double dz);

}  // namespace bf
