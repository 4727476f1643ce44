#pragma once

#include <cstdint>
#include <random>

namespace xcube {

// RNG contract: mt19937_64 (period 2^19937-1), seed-deterministic. Uniform
// reals are built from the top 53 bits so the stream does not depend on the
// standard library's distribution internals.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// independent stream for chain k of a multi-chain experiment
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t k) {
    return splitmix64(base + 0x9E3779B97F4A7C15ull * (k + 1));
}

}  // namespace xcube
