#include "xenorisk/model/binning.hpp"

#include <algorithm>
#include <cmath>

#include "xenorisk/common/error.hpp"

namespace xenorisk::model {

std::uint8_t BinCuts::bin(std::size_t f, double x) const {
  const auto& c = cuts[f];
  return static_cast<std::uint8_t>(std::lower_bound(c.begin(), c.end(), x) - c.begin());
}

BinCuts compute_bin_cuts(const Matrix& X, std::size_t max_bins) {
  if (max_bins < 2 || max_bins > kMaxBins) throw ValidationError("max_bins must lie in [2, 256]");
  BinCuts out;
  out.cuts.resize(X.cols);
  std::vector<double> col(X.rows);
  for (std::size_t f = 0; f < X.cols; ++f) {
    for (std::size_t r = 0; r < X.rows; ++r) {
      col[r] = X.at(r, f);
      if (!std::isfinite(col[r])) throw ValidationError("non-finite feature value in column " + std::to_string(f));
    }
    std::sort(col.begin(), col.end());
    auto& cuts = out.cuts[f];
    const std::size_t distinct = static_cast<std::size_t>(std::unique(col.begin(), col.end()) - col.begin());
    if (distinct <= max_bins) {
      cuts.assign(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(distinct > 0 ? distinct - 1 : 0));
      continue;
    }
    // quantiles over the full (non-deduplicated) column
    for (std::size_t r = 0; r < X.rows; ++r) col[r] = X.at(r, f);
    std::sort(col.begin(), col.end());
    const double top = col.back();
    for (std::size_t q = 1; q < max_bins; ++q) {
      const double v = col[q * X.rows / max_bins];
      if (v >= top) break;
      if (cuts.empty() || v > cuts.back()) cuts.push_back(v);
    }
  }
  return out;
}

BinnedMatrix bin_matrix(const Matrix& X, const BinCuts& cuts) {
  if (cuts.features() != X.cols) throw ValidationError("bin cuts do not match the feature count");
  BinnedMatrix b;
  b.rows = X.rows;
  b.cols = X.cols;
  b.bins.resize(X.rows * X.cols);
  for (std::size_t f = 0; f < X.cols; ++f) {
    std::uint8_t* dst = b.bins.data() + f * X.rows;
    for (std::size_t r = 0; r < X.rows; ++r) dst[r] = cuts.bin(f, X.at(r, f));
  }
  return b;
}

}  // namespace xenorisk::model
