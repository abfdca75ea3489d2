#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xenorisk/model/dataset.hpp"

namespace xenorisk::model {

inline constexpr std::size_t kMaxBins = 256;

// Per-feature ascending cut points. bin(x) is the number of cuts strictly
// below x, so bin(x) <= b exactly when x <= cuts[b].
struct BinCuts {
  std::vector<std::vector<double>> cuts;

  std::size_t features() const { return cuts.size(); }
  std::size_t n_bins(std::size_t f) const { return cuts[f].size() + 1; }
  std::uint8_t bin(std::size_t f, double x) const;
};

// Quantile cuts from the rows of X (at most max_bins bins per feature;
// features with few distinct values get one bin per value). Throws
// ValidationError for non-finite values or max_bins outside [2, 256].
BinCuts compute_bin_cuts(const Matrix& X, std::size_t max_bins = 64);

// Feature-major bin codes: column f occupies [f * rows, (f + 1) * rows).
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bins;

  const std::uint8_t* column(std::size_t f) const { return bins.data() + f * rows; }
};

BinnedMatrix bin_matrix(const Matrix& X, const BinCuts& cuts);

}  // namespace xenorisk::model
