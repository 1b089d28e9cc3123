#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lcc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of a named stage derived from a parent seed: mix64(parent ^ hash(name))
/// with a 64-bit FNV-1a hash of the name. Distinct stage names give unrelated
/// streams, and the rule does not depend on call order.
std::uint64_t stage_seed(std::uint64_t parent, std::string_view stage);
/// Seed of the k-th repetition of a stage.
std::uint64_t stage_seed(std::uint64_t parent, std::string_view stage, std::uint64_t k);

Rng make_rng(std::uint64_t seed);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);
/// Uniform integer in [0, n).
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);
/// Standard normal deviate (Box-Muller).
double normal01(Rng& rng);

}  // namespace lcc
