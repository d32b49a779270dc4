#include "beamfluid/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define BF_HAVE_AVX2_TU 1
#endif

namespace bf::kernels::detail {

#ifdef BF_HAVE_AVX2_TU

namespace {
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}
}  // namespace

template <>
double dot<Level::avx2>(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <>
double sum<Level::avx2>(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

template <>
double sum_squares<Level::avx2>(const double* a, std::size_t n) {
  return dot<Level::avx2>(a, a, n);
}

template <>
double weighted_sum_squares<Level::avx2>(const double* w, const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d av = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), av), av, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * a[i] * a[i];
  return s;
}

template <>
void axpy<Level::avx2>(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d al = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(al, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

template <>
void scale_complex<Level::avx2>(std::complex<double>* z, const double* factor, std::size_t n) {
  auto* zd = reinterpret_cast<double*>(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // [f0 f0 f1 f1] against [re0 im0 re1 im1]
    __m128d f = _mm_loadu_pd(factor + i);
    __m256d ff = _mm256_permute4x64_pd(_mm256_castpd128_pd256(f), 0b01010000);
    _mm256_storeu_pd(zd + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(zd + 2 * i), ff));
  }
  for (; i < n; ++i) z[i] *= factor[i];
}

#else

template <>
double dot<Level::avx2>(const double* a, const double* b, std::size_t n) {
  return dot<Level::scalar>(a, b, n);
}
template <>
double sum<Level::avx2>(const double* a, std::size_t n) {
  return sum<Level::scalar>(a, n);
}
template <>
double sum_squares<Level::avx2>(const double* a, std::size_t n) {
  return sum_squares<Level::scalar>(a, n);
}
template <>
double weighted_sum_squares<Level::avx2>(const double* w, const double* a, std::size_t n) {
  return weighted_sum_squares<Level::scalar>(w, a, n);
}
template <>
void axpy<Level::avx2>(double alpha, const double* x, double* y, std::size_t n) {
  axpy<Level::scalar>(alpha, x, y, n);
}
template <>
void scale_complex<Level::avx2>(std::complex<double>* z, const double* factor, std::size_t n) {
  scale_complex<Level::scalar>(z, factor, n);
}

#endif

}  // namespace bf::kernels::detail
