#pragma once

#include <cstdint>

namespace perc::rng {

// Counter-based generator: every random number is a pure function of
// (seed, stream, counter), built from the SplitMix64 finalizer. No state is
// carried between draws, so trials can run in any order or on any thread.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key of sub-stream `index` under `parent`.
constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t index) {
    return mix64(parent ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Uniform double in [0, 1) for element `counter` of stream `key` (53 bits).
constexpr double uniform(std::uint64_t key, std::uint64_t counter) {
    return static_cast<double>(mix64(key ^ (counter * kGolden)) >> 11) * 0x1.0p-53;
}

} // namespace perc::rng
