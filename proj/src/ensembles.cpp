#include "beamfluid/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "beamfluid/analysis.hpp"
#include "beamfluid/errors.hpp"
#include "beamfluid/fluid_discretization.hpp"
#include "beamfluid/geometry.hpp"
#include "beamfluid/lifting.hpp"
#include "beamfluid/random_fields.hpp"

namespace bf {

namespace {

LowPassSpec ensemble_spec(const PeriodicGrid1D& g) { return {std::min<int>(32, static_cast<int>(g.n / 2) - 1), 2.0}; }

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

}  // namespace

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += jobs) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

InequalityMember inequality_member(const PeriodicGrid1D& g, std::uint64_t seed, std::size_t i) {
  const LowPassSpec spec = ensemble_spec(g);
  const ScalarField1D eta = random_positive_field(g, member_seed(seed, 2 * i), 0.5, spec);
  const ScalarField1D hdot = random_lowpass_field(g, member_seed(seed, 2 * i + 1), spec);
  InequalityMember m;
  const A1Result a1 = inequality_A1_ratio(eta, 0.375);
  const A2Result a2 = pointwise_gradient_bounds(eta);
  const StreamEstimateReport a4 = stream_norm_estimates({BeamState{eta, hdot, 0.0}});
  m.ratio = {a1.ratio, a2.ratio_1, a2.ratio_2, a4.ratio[0], a4.ratio[1], a4.ratio[2], a4.ratio[3], a4.ratio[4]};
  ScalarField1D inv(g);
  for (std::size_t j = 0; j < g.n; ++j) inv[j] = 1.0 / eta[j];
  m.sup_inv = 1.0 / eta.min();
  m.d_min = d_min(integrate(inv), sobolev_norm(eta, 2), g.L);
  for (double r : m.ratio) m.finite = m.finite && std::isfinite(r);
  m.finite = m.finite && std::isfinite(m.d_min);
  return m;
}

InequalityEnsembleReport inequality_ensemble(const PeriodicGrid1D& g, std::uint64_t seed, std::size_t size,
                                             std::size_t jobs) {
  InequalityEnsembleReport rep;
  rep.size = size;
  rep.members.resize(size);
  parallel_for(size, jobs, [&](std::size_t i) { rep.members[i] = inequality_member(g, seed, i); });
  rep.min_d_min_margin = size ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const InequalityMember& m = rep.members[i];
    if (!m.finite) ++rep.nonfinite;
    const double margin = m.d_min - m.sup_inv;
    if (margin < 0.0) ++rep.d_min_violations;
    rep.min_d_min_margin = std::min(rep.min_d_min_margin, margin);
    for (std::size_t k = 0; k < InequalityMember::kCount; ++k) {
      if (!std::isfinite(m.ratio[k])) continue;
      rep.max_full[k] = std::max(rep.max_full[k], m.ratio[k]);
      if (i < size / 2) rep.max_half[k] = std::max(rep.max_half[k], m.ratio[k]);
    }
  }
  for (std::size_t k = 0; k < InequalityMember::kCount; ++k)
    rep.relative_change[k] = rep.max_half[k] > 0.0 ? (rep.max_full[k] - rep.max_half[k]) / rep.max_half[k] : 0.0;
  return rep;
}

std::vector<InvarianceCheck> inequality_invariances(const PeriodicGrid1D& g, std::uint64_t seed) {
  const ScalarField1D eta = random_positive_field(g, member_seed(seed, 0), 0.5, ensemble_spec(g));
  const ScalarField1D scaled = 2.5 * eta;
  const ScalarField1D moved = shifted(eta, 0.3 * g.L);
  const A1Result a = inequality_A1_ratio(eta, 0.375), as = inequality_A1_ratio(scaled, 0.375),
                 am = inequality_A1_ratio(moved, 0.375);
  const A2Result b = pointwise_gradient_bounds(eta), bs = pointwise_gradient_bounds(scaled),
                 bm = pointwise_gradient_bounds(moved);
  return {{"gradient_quartic_homogeneity", rel_dev(a.ratio, as.ratio)},
          {"gradient_quartic_translation", rel_dev(a.ratio, am.ratio)},
          {"gradient_pointwise_h2h3_homogeneity", rel_dev(b.ratio_1, bs.ratio_1)},
          {"gradient_pointwise_h2h3_translation", rel_dev(b.ratio_1, bm.ratio_1)},
          {"gradient_pointwise_h3_homogeneity", rel_dev(b.ratio_2, bs.ratio_2)},
          {"gradient_pointwise_h3_translation", rel_dev(b.ratio_2, bm.ratio_2)}};
}

LiftMember lift_member(std::size_t nx, std::size_t nz, std::uint64_t seed, std::size_t index, double r0_max) {
  const PeriodicGrid1D g(1.0, nx);
  const DeformationMap map = build_deformation(random_height(g, member_seed(seed, 2 * index), r0_max));
  const ScalarField1D etadot = random_lowpass_field(g, member_seed(seed, 2 * index + 1), {8, 2.0});
  const LiftConfig cfg = make_lift_config(map);
  const LiftOperator op(etadot, cfg);
  LiftMember m;
  m.r0 = map.r0;
  m.divergence_ratio = lift_divergence_sup(op) / sobolev_norm(etadot, 1);
  const VectorField2D u = build_lift(map, etadot, cfg, nz, kU1Lattice, kU2Lattice);
  const std::size_t N = nz - 1;
  for (std::size_t j = 0; j < nx; ++j) {
    m.top_exact = m.top_exact && u.c2(j, N) == etadot[j] && u.c1(j, N) == 0.0;
    m.bottom_zero = m.bottom_zero && u.c1(j, 0) == 0.0 && u.c2(j, 0) == 0.0;
  }
  const LiftInterfaceReport itf = lift_interface_matching(op);
  m.value_mismatch = itf.value_mismatch;
  m.derivative_mismatch = itf.derivative_mismatch;
  const LiftContinuityReport cont = lift_continuity_report(map, {etadot});
  m.continuity = cont.max_ratio;
  m.finite = cont.all_finite && std::isfinite(m.divergence_ratio);
  return m;
}

LiftEnsembleReport lift_ensemble(std::size_t nx, std::size_t nz, std::uint64_t seed, std::size_t size, double r0_max,
                                 std::size_t jobs) {
  LiftEnsembleReport rep;
  rep.members.resize(size);
  parallel_for(size, jobs, [&](std::size_t i) { rep.members[i] = lift_member(nx, nz, seed, i, r0_max); });
  for (const auto& m : rep.members) {
    rep.max_divergence_ratio = std::max(rep.max_divergence_ratio, m.divergence_ratio);
    rep.max_interface_mismatch = std::max({rep.max_interface_mismatch, m.value_mismatch, m.derivative_mismatch});
    rep.traces_exact = rep.traces_exact && m.top_exact && m.bottom_zero;
    rep.all_finite = rep.all_finite && m.finite;
    for (int k = 0; k < 3; ++k) rep.max_continuity[k] = std::max(rep.max_continuity[k], m.continuity[k]);
  }
  return rep;
}

}  // namespace bf
