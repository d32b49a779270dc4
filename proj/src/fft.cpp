#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace bf::fft {

namespace {

struct Plans {
  fftw_plan r2c;
  fftw_plan c2r;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans are created once per length and reused with the new-array execute
// calls, which are thread-safe.
const Plans& plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const int ni = static_cast<int>(n);
  std::vector<double> x(n);
  std::vector<std::complex<double>> c(n / 2 + 1);
  auto* cc = reinterpret_cast<fftw_complex*>(c.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p{fftw_plan_dft_r2c_1d(ni, x.data(), cc, flags),
          fftw_plan_dft_c2r_1d(ni, cc, x.data(), flags | FFTW_DESTROY_INPUT)};
  return cache.emplace(n, p).first->second;
}

}  // namespace

void forward(const double* x, std::size_t n, std::complex<double>* out) {
  const Plans& p = plans_for(n);
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(x), reinterpret_cast<fftw_complex*>(out));
}

std::vector<std::complex<double>> forward(const std::vector<double>& x) {
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  forward(x.data(), x.size(), out.data());
  return out;
}

void inverse(const std::complex<double>* c, std::size_t n, double* out) {
  const Plans& p = plans_for(n);
  std::vector<std::complex<double>> work(c, c + n / 2 + 1);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(work.data()), out);
  const double s = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) out[j] *= s;
}

std::vector<double> inverse(const std::vector<std::complex<double>>& c, std::size_t n) {
  std::vector<double> out(n);
  inverse(c.data(), n, out.data());
  return out;
}

}  // namespace bf::fft
