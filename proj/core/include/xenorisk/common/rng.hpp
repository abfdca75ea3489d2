#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace xenorisk {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Stable 64-bit tag for a string (FNV-1a), used to name seed substreams.
std::uint64_t hash_tag(std::string_view tag);

// Derives an independent substream seed from a base seed and a path of tags.
// Parallel code seeds each work item this way so results do not depend on
// scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

// Uniform sample of k distinct indices from [0, population) without
// replacement, returned in ascending order. k is clamped to population.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k, Rng& rng);

// Uniform index in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Uniform real in [0, 1).
double uniform_unit(Rng& rng);

}  // namespace xenorisk
