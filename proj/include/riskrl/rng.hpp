#pragma once

#include <cstdint>
#include <random>

namespace riskrl {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
// Independent of the standard library's distribution implementations, so
// sampled trajectories are identical across toolchains.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of the independent stream for run `label` under `master`.
// Counter-based: stream i depends only on (master, label), never on the
// order in which streams are created, so parallel fan-out is reproducible.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t label) {
    return splitmix64(splitmix64(master) ^ (label * 0xd1b54a32d192ed03ULL + 1));
}

} // namespace riskrl
