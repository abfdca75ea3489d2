#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xenorisk::model {

struct TrainTestSplit {
  std::vector<std::size_t> train;  // sorted
  std::vector<std::size_t> test;   // sorted
};

// Per label, a seeded shuffle puts round(n_label * test_fraction) items in the
// test set. Throws ValidationError for empty labels or a fraction outside (0, 1).
TrainTestSplit stratified_split(std::span<const int> y, double test_fraction, std::uint64_t seed);

// k disjoint validation folds (each sorted) covering every index; per label,
// shuffled items are dealt round-robin so fold class counts differ by at most
// one. Throws ValidationError when k < 2 or k exceeds the item count.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, std::size_t k, std::uint64_t seed);

// Complement of one fold within [0, n), sorted.
std::vector<std::size_t> fold_complement(std::span<const std::size_t> fold, std::size_t n);

}  // namespace xenorisk::model
