#pragma once

#include <complex>
#include <cstddef>

// Inner-loop kernels with a scalar reference path and an AVX2+FMA path.
// The active level is picked once from the CPU at first use.
namespace bf::kernels {

enum class Level { scalar, avx2 };

Level active_level();
const char* level_name(Level level);
bool level_available(Level level);
// Overrides the detected level (tests, BEAMFLUID_SIMD=scalar).
void force_level(Level level);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double weighted_sum_squares(const double* w, const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
// z[i] *= factor[i]
void scale_complex(std::complex<double>* z, const double* factor, std::size_t n);

namespace detail {
template <Level L> double dot(const double* a, const double* b, std::size_t n);
template <Level L> double sum(const double* a, std::size_t n);
template <Level L> double sum_squares(const double* a, std::size_t n);
template <Level L> double weighted_sum_squares(const double* w, const double* a, std::size_t n);
template <Level L> void axpy(double alpha, const double* x, double* y, std::size_t n);
template <Level L> void scale_complex(std::complex<double>* z, const double* factor, std::size_t n);
}  // namespace detail

}  // namespace bf::kernels
