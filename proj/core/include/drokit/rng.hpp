#pragma once

#include <cstdint>
#include <random>

namespace drokit {

/// All randomness in the library flows through this engine. mt19937_64 is
/// fully specified by the standard, and the helpers below avoid
/// std::*_distribution (whose output is implementation-defined), so seeded
/// sequences are identical across platforms.
using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) with 53 random mantissa bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

} // namespace drokit
