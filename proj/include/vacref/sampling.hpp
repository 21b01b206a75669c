#pragma once

#include <cstdint>

namespace vacref {

// Seeded low-discrepancy point source: Halton sequences with a
// Cranley-Patterson rotation derived from the seed.  Identical seeds give
// identical streams on every platform.
class HaltonSampler {
public:
    explicit HaltonSampler(std::uint64_t seed);

    // Coordinate `dim` (0-based, < 6) of sample `index` in (0, 1).
    double sample(std::uint64_t index, int dim) const;

private:
    double offset_[6];
};

// SplitMix64 step; the seed scrambler behind the sampler and anything else
// that needs reproducible pseudo-random values.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace vacref
