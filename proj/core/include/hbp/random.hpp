#pragma once

// Platform-stable draws on top of std::mt19937_64. The standard distributions
// are implementation-defined, so seeded outputs would differ between
// standard libraries; these mappings are fixed.

#include <cstddef>
#include <cstdint>
#include <random>

namespace hbp {

using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
inline double unit_uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform in [lo, hi]; the upper end is reachable only through rounding.
inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(rng);
}

/// Uniform integer in [0, bound) by rejection, bound ≥ 1.
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % b);
}

}  // namespace hbp
