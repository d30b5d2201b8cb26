#pragma once

#include <cstdint>
#include <random>

namespace twedge {

using Rng = std::mt19937_64;

/// Seed of replicate `index` in the experiment seeded by `seed`. Streams for
/// different indices are decorrelated by a splitmix64 finalizer, so results
/// never depend on the order in which replicates are executed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace twedge
