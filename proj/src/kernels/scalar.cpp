#include "beamfluid/kernels.hpp"

namespace bf::kernels::detail {

template <>
double dot<Level::scalar>(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <>
double sum<Level::scalar>(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

template <>
double sum_squares<Level::scalar>(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

template <>
double weighted_sum_squares<Level::scalar>(const double* w, const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * a[i];
  return s;
}

template <>
void axpy<Level::scalar>(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <>
void scale_complex<Level::scalar>(std::complex<double>* z, const double* factor, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] *= factor[i];
}

}  // namespace bf::kernels::detail
