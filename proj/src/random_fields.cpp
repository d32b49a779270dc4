#include "beamfluid/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "beamfluid/errors.hpp"
#include "fft.hpp"

namespace bf {

std::uint64_t member_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ScalarField1D random_lowpass_field(const PeriodicGrid1D& grid, std::uint64_t seed, const LowPassSpec& spec) {
  const std::size_t n = grid.n;
  if (spec.max_mode < 1 || static_cast<std::size_t>(spec.max_mode) >= n / 2)
    throw InvalidArgument("max_mode must lie in [1, n/2)");
  std::mt19937_64 rng(seed);
  // explicit 53-bit mapping keeps phases identical across standard libraries
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<std::complex<double>> c(n / 2 + 1, {0.0, 0.0});
  for (int m = 1; m <= spec.max_mode; ++m) {
    const double amp = std::pow(1.0 + static_cast<double>(m) * m, -spec.decay);
    c[static_cast<std::size_t>(m)] = std::polar(amp, 2.0 * std::numbers::pi * uniform());
  }
  ScalarField1D f(grid, fft::inverse(c, n));
  const double a = f.max_abs();
  for (auto& v : f.values) v /= a;
  return f;
}

ScalarField1D random_positive_field(const PeriodicGrid1D& grid, std::uint64_t seed, double margin,
                                    const LowPassSpec& spec) {
  if (!(margin > 0.0)) throw InvalidArgument("margin must be > 0");
  ScalarField1D f = random_lowpass_field(grid, seed, spec);
  const double shift = margin - f.min();
  for (auto& v : f.values) v += shift;
  return f;
}

ScalarField1D random_height(const PeriodicGrid1D& grid, std::uint64_t seed, double r0_max, const LowPassSpec& spec) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double amp = 0.01 + 0.29 * uniform();
    ScalarField1D h = random_lowpass_field(grid, rng(), spec);
    for (auto& v : h.values) v = 1.0 + amp * v;
    if (sobolev_norm(h, 2) + 1.0 / h.min() <= r0_max) return h;
  }
  throw InvalidArgument("no height with R0 <= " + std::to_string(r0_max) + " found in 1000 draws");
}

}  // namespace bf
