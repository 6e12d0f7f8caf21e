#pragma once

#include <cstdint>

namespace shellrg {

/// splitmix64: counter-based generator used for all randomized draws. Keyed
/// draws are reproducible independently of scheduling or worker count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t rngKey(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                            std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

/// Uniform double in [0, 1) from 64 random bits.
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniformRange(std::uint64_t bits, double lo, double hi) {
    return lo + (hi - lo) * uniform01(bits);
}

} // namespace shellrg
