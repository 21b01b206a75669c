#include "vacref/sampling.hpp"

#include <cmath>

namespace vacref {

namespace {

constexpr int kBases[6] = {2, 3, 5, 7, 11, 13};

double radical_inverse(std::uint64_t index, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double value = 0.0;
    while (index > 0) {
        value += static_cast<double>(index % static_cast<std::uint64_t>(base)) * f;
        index /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return value;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

HaltonSampler::HaltonSampler(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (double& off : offset_) {
        off = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    }
}

double HaltonSampler::sample(std::uint64_t index, int dim) const {
    // index + 1: the zeroth Halton point is the origin, which we skip.
    double u = radical_inverse(index + 1, kBases[dim]) + offset_[dim];
    u -= std::floor(u);
    if (u <= 0.0) u = 0x1.0p-53;  // keep strictly inside (0, 1)
    return u;
}

}  // namespace vacref
