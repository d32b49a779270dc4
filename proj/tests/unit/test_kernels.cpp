#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "beamfluid/kernels.hpp"

using namespace bf::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Lengths straddling the 4-wide vector body and its remainder.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 65, 1000, 4097};

class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    if (!level_available(Level::avx2)) GTEST_SKIP() << "CPU without AVX2/FMA";
  }
};

}  // namespace

TEST(Kernels, ScalarReferenceValues) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1}, w{1, 0, 2, 0, 1};
  EXPECT_DOUBLE_EQ(detail::dot<Level::scalar>(a.data(), b.data(), 5), 35.0);
  EXPECT_DOUBLE_EQ(detail::sum<Level::scalar>(a.data(), 5), 15.0);
  EXPECT_DOUBLE_EQ(detail::sum_squares<Level::scalar>(a.data(), 5), 55.0);
  EXPECT_DOUBLE_EQ(detail::weighted_sum_squares<Level::scalar>(w.data(), a.data(), 5), 1.0 + 18.0 + 25.0);
  std::vector<double> y = b;
  detail::axpy<Level::scalar>(2.0, a.data(), y.data(), 5);
  EXPECT_EQ(y, (std::vector<double>{7, 8, 9, 10, 11}));
}

TEST(Kernels, DispatchReportsALevel) {
  const Level l = active_level();
  EXPECT_TRUE(level_available(l));
  EXPECT_TRUE(level_available(Level::scalar));
  EXPECT_STRNE(level_name(l), "");
}

TEST_P(KernelEquivalence, ReductionsMatchScalar) {
  const std::size_t n = GetParam();
  const auto a = random_vector(n, 1), b = random_vector(n, 2), w = random_vector(n, 3);
  const double tol = 1e-14 * (1.0 + static_cast<double>(n));
  EXPECT_NEAR(detail::dot<Level::avx2>(a.data(), b.data(), n), detail::dot<Level::scalar>(a.data(), b.data(), n), tol);
  EXPECT_NEAR(detail::sum<Level::avx2>(a.data(), n), detail::sum<Level::scalar>(a.data(), n), tol);
  EXPECT_NEAR(detail::sum_squares<Level::avx2>(a.data(), n), detail::sum_squares<Level::scalar>(a.data(), n), tol);
  EXPECT_NEAR(detail::weighted_sum_squares<Level::avx2>(w.data(), a.data(), n),
              detail::weighted_sum_squares<Level::scalar>(w.data(), a.data(), n), tol);
}

TEST_P(KernelEquivalence, ElementwiseMatchScalar) {
  const std::size_t n = GetParam();
  const auto x = random_vector(n, 4), f = random_vector(n, 5);
  auto y1 = random_vector(n, 6), y2 = y1;
  detail::axpy<Level::avx2>(0.7, x.data(), y1.data(), n);
  detail::axpy<Level::scalar>(0.7, x.data(), y2.data(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);

  std::vector<std::complex<double>> z1(n), z2;
  for (std::size_t i = 0; i < n; ++i) z1[i] = {x[i], f[i]};
  z2 = z1;
  detail::scale_complex<Level::avx2>(z1.data(), f.data(), n);
  detail::scale_complex<Level::scalar>(z2.data(), f.data(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(z1[i], z2[i]);
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelEquivalence, ::testing::ValuesIn(kLengths));

TEST(Kernels, ForcedLevelRoutesPublicEntryPoints) {
  const Level saved = active_level();
  const auto a = random_vector(101, 7);
  force_level(Level::scalar);
  const double s = sum_squares(a.data(), a.size());
  EXPECT_EQ(active_level(), Level::scalar);
  EXPECT_DOUBLE_EQ(s, detail::sum_squares<Level::scalar>(a.data(), a.size()));
  force_level(saved);
  EXPECT_EQ(active_level(), saved);
}
