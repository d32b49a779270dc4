#pragma once

#include <cstdint>

#include "beamfluid/core_fields.hpp"

namespace bf {

// Independent stream seed for ensemble member `index` (splitmix64 mixing), so
// results do not depend on how members are distributed over threads.
std::uint64_t member_seed(std::uint64_t base, std::uint64_t index);

struct LowPassSpec {
  int max_mode = 32;   // modes 1..max_mode are populated
  double decay = 2.0;  // |c_m| proportional to (1 + m^2)^(-decay)
};

// Zero-mean field with random phases, normalised to max |f| = 1 at the nodes.
ScalarField1D random_lowpass_field(const PeriodicGrid1D& grid, std::uint64_t seed, const LowPassSpec& spec = {});

// f - min f + margin for a unit-amplitude low-pass f; min equals margin.
ScalarField1D random_positive_field(const PeriodicGrid1D& grid, std::uint64_t seed, double margin,
                                    const LowPassSpec& spec = {});

// h = 1 + a f with f a unit low-pass field and a in [0.01, 0.3]; draws are
// repeated until R0 = |h; H2| + max 1/h <= r0_max.
ScalarField1D random_height(const PeriodicGrid1D& grid, std::uint64_t seed, double r0_max,
                            const LowPassSpec& spec = {8, 2.0});

}  // namespace bf
