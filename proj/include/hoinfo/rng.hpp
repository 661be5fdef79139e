#pragma once

#include <cstdint>
#include <random>

namespace hoinfo {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream (stream, attempt) under a master seed. Substreams are
/// addressed by counter, so any worker can construct any of them.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t attempt = 0) noexcept {
    return mix64(mix64(mix64(seed) ^ stream) ^ (attempt * 0xd1342543de82ef95ULL));
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t attempt = 0) {
    return std::mt19937_64(substream_seed(seed, stream, attempt));
}

}  // namespace hoinfo
