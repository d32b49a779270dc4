#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "beamfluid/core_fields.hpp"

namespace bf {

// Runs body(i) for i in [0, n) on `jobs` threads; every index writes its own
// slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body);

// Ratios of the positivity and stream-function estimates for one random
// positive eta (margin 0.5) and a random mean-free hdot.
struct InequalityMember {
  static constexpr std::size_t kCount = 8;
  static constexpr std::array<const char*, kCount> names{
      "gradient_quartic",  "gradient_pointwise_h2h3", "gradient_pointwise_h3", "stream_grad_pointwise",
      "stream_dy_l2",      "stream_dx_l2",            "stream_dt_l2t",         "stream_dxx_l2t"};
  std::array<double, kCount> ratio{};
  double sup_inv = 0.0;
  double d_min = 0.0;
  bool finite = true;
};

InequalityMember inequality_member(const PeriodicGrid1D& grid, std::uint64_t seed, std::size_t index);

struct InequalityEnsembleReport {
  std::size_t size = 0;
  std::array<double, InequalityMember::kCount> max_half{};  // over the first size / 2 members
  std::array<double, InequalityMember::kCount> max_full{};
  std::array<double, InequalityMember::kCount> relative_change{};
  std::size_t nonfinite = 0;
  std::size_t d_min_violations = 0;
  double min_d_min_margin = 0.0;  // min over members of d_min - sup 1/eta
  std::vector<InequalityMember> members;
};

InequalityEnsembleReport inequality_ensemble(const PeriodicGrid1D& grid, std::uint64_t seed, std::size_t size,
                                             std::size_t jobs = 1);

struct InvarianceCheck {
  std::string name;
  double deviation = 0.0;  // relative
};

// Homogeneity under eta -> 2.5 eta and invariance under translation by 0.3 L
// for the member-0 field of the ensemble.
std::vector<InvarianceCheck> inequality_invariances(const PeriodicGrid1D& grid, std::uint64_t seed);

struct LiftMember {
  double r0 = 0.0;
  double divergence_ratio = 0.0;  // sup |div U| / |etadot; H1|
  bool top_exact = true;
  bool bottom_zero = true;
  double value_mismatch = 0.0;
  double derivative_mismatch = 0.0;
  std::array<double, 3> continuity{};
  bool finite = true;
};

// Height with R0 <= r0_max and mean-free low-pass etadot for member `index`.
LiftMember lift_member(std::size_t nx, std::size_t nz, std::uint64_t seed, std::size_t index, double r0_max);

struct LiftEnsembleReport {
  std::vector<LiftMember> members;
  double max_divergence_ratio = 0.0;
  double max_interface_mismatch = 0.0;
  bool traces_exact = true;
  bool all_finite = true;
  std::array<double, 3> max_continuity{};
};

LiftEnsembleReport lift_ensemble(std::size_t nx, std::size_t nz, std::uint64_t seed, std::size_t size, double r0_max,
                                 std::size_t jobs = 1);

}  // namespace bf
