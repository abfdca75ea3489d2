#include "xenorisk/model/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/rng.hpp"

namespace xenorisk::model {
namespace {

// Indices grouped by label (ascending), each group shuffled.
std::map<int, std::vector<std::size_t>> shuffled_groups(std::span<const int> y, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < y.size(); ++i) groups[y[i]].push_back(i);
  for (auto& [label, idx] : groups) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(static_cast<std::int64_t>(label))}));
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
  }
  return groups;
}

}  // namespace

TrainTestSplit stratified_split(std::span<const int> y, double test_fraction, std::uint64_t seed) {
  if (y.empty()) throw ValidationError("cannot split an empty label set");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ValidationError("test fraction must lie in (0, 1)");
  TrainTestSplit s;
  for (const auto& [label, idx] : shuffled_groups(y, seed)) {
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
    s.test.insert(s.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.insert(s.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs at least 2 folds");
  if (k > y.size()) throw ValidationError("more folds than items");
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (const auto& [label, idx] : shuffled_groups(y, seed)) {
    // continue the deal where the previous label stopped so fold sizes stay balanced
    for (const std::size_t i : idx) folds[next++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> fold_complement(std::span<const std::size_t> fold, std::size_t n) {
  std::vector<std::size_t> out;
  out.reserve(n - fold.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < fold.size() && fold[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace xenorisk::model
