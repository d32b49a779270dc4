#include <atomic>
#include <cstdlib>
#include <cstring>

#include "beamfluid/kernels.hpp"

namespace bf::kernels {

namespace {

Level detect() {
  if (const char* env = std::getenv("BEAMFLUID_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return Level::scalar;
  return level_available(Level::avx2) ? Level::avx2 : Level::scalar;
}

std::atomic<int>& level_slot() {
  static std::atomic<int> slot{static_cast<int>(detect())};
  return slot;
}

}  // namespace

bool level_available(Level level) {
  if (level == Level::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level active_level() { return static_cast<Level>(level_slot().load(std::memory_order_relaxed)); }

const char* level_name(Level level) { return level == Level::avx2 ? "avx2" : "scalar"; }

void force_level(Level level) {
  if (!level_available(level)) level = Level::scalar;
  level_slot().store(static_cast<int>(level), std::memory_order_relaxed);
}

#define BF_DISPATCH(fn, ...)                                      \
  (active_level() == Level::avx2 ? detail::fn<Level::avx2>(__VA_ARGS__) \
                                 : detail::fn<Level::scalar>(__VA_ARGS__))

double dot(const double* a, const double* b, std::size_t n) { return BF_DISPATCH(dot, a, b, n); }
double sum(const double* a, std::size_t n) { return BF_DISPATCH(sum, a, n); }
double sum_squares(const double* a, std::size_t n) { return BF_DISPATCH(sum_squares, a, n); }
double weighted_sum_squares(const double* w, const double* a, std::size_t n) {
  return BF_DISPATCH(weighted_sum_squares, w, a, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  BF_DISPATCH(axpy, alpha, x, y, n);
}
void scale_complex(std::complex<double>* z, const double* factor, std::size_t n) {
  BF_DISPATCH(scale_complex, z, factor, n);
}

#undef BF_DISPATCH

}  // namespace bf::kernels
