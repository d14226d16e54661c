// Counter-based random phases.
//
// Phases are a pure function of (seed, index): substream(seed, i) is the
// i-th output of a SplitMix64 generator seeded at `seed`.  Trial seeds in
// the experiment harness are derived the same way from (base_seed, trial),
// so every experiment is bit-reproducible independently of evaluation
// order and worker count.

#pragma once

#include <cstdint>

namespace zrf {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// i-th output of SplitMix64 started at `seed`.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + (index + 1) * kGolden);
}

// Map 64 random bits to [0, 1) with 53-bit resolution.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform phase in [0, 2*pi).
inline double phase_from(std::uint64_t seed, std::uint64_t index) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return kTwoPi * unit_double(substream(seed, index));
}

}  // namespace zrf
