#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cpt {

/// Root seed for a run. Same seed + same parameters => bit-identical
/// schedules, transcripts and experiment tables.
using RngSeed = std::uint64_t;

/// All randomness in the library flows from one root seed through
/// splitmix64-based stream derivation into std::mt19937_64 generators.
/// The generator family and the derivation below are part of the
/// reproducibility contract and must not change between versions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a root seed and a path of
/// integer tags (algorithm id, grid coordinates, trial index, ...).
inline RngSeed derive_seed(RngSeed root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = root ^ 0xd1b54a32d192ed03ULL;
    std::uint64_t mixed = splitmix64(state);
    for (std::uint64_t tag : path) {
        state ^= tag + 0x9e3779b97f4a7c15ULL + (mixed << 6) + (mixed >> 2);
        mixed = splitmix64(state);
    }
    return mixed;
}

inline std::mt19937_64 make_rng(RngSeed seed) {
    return std::mt19937_64{seed};
}

} // namespace cpt
