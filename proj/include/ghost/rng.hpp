#pragma once

#include <cstdint>

namespace ghost::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer. Platform-independent.
inline std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Value at position `idx` of the SplitMix64 stream starting at `seed`.
inline std::uint64_t stream_at(std::uint64_t seed, std::uint64_t idx) {
    return mix(seed + kGolden * (idx + 1));
}

// uniform double in [0, 1)
inline double to_unit(std::uint64_t v) {
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

// Seed for realization r of a campaign keyed on master_seed.
inline std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t r) {
    return stream_at(master_seed, r);
}

}  // namespace ghost::rng
