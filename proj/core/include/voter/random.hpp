#pragma once

#include <cstdint>
#include <random>

namespace voter {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream seed for child `index` of `parent`: splitmix64(splitmix64(parent) + index).
/// Distinct indices give statistically independent mt19937_64 streams and the
/// value depends only on (parent, index).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Uniform integer in [0, bound) by rejection (bound > 0); independent of the
/// standard library's distribution implementation.
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound);

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(Engine& rng);

}  // namespace voter
