#pragma once

#include <cmath>
#include <cstdint>

namespace pwlneuro {

/**
 * Counter-based random streams: every draw is a pure function of
 * (seed, stream, counter), so parallel and serial evaluation orders
 * produce identical values.
 */
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform in (0, 1), never exactly 0 or 1.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t h = splitmix64(seed ^ (stream * 0xD1342543DE82EF95ull + counter));
    return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal via Box-Muller on two derived uniform streams.
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform01(seed, stream * 2 + 0, counter);
    const double u2 = uniform01(seed, stream * 2 + 1, counter);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

} // namespace rng

} // namespace pwlneuro
