#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "xenorisk/model/booster.hpp"
#include "xenorisk/model/dataset.hpp"

namespace xenorisk::model {

struct FeatureImportance {
  std::string feature;
  std::size_t index = 0;
  double mean = 0.0;        // mean drop in macro-F1 (points) over repeats
  double dispersion = 0.0;  // sample standard deviation over repeats
};

struct AttributionReport {
  double baseline_macro_f1 = 0.0;
  std::size_t n_repeats = 0;
  std::uint64_t seed = 0;
  std::vector<FeatureImportance> ranked;  // mean descending, then index ascending
};

// Importance of feature f is the baseline macro-F1 minus the macro-F1 after
// shuffling column f, averaged over n_repeats shuffles; shuffle (f, r) uses
// derive_seed(seed, {f, r}). Features the model never splits on score exactly
// 0. `names` may be empty (names become column indices).
AttributionReport permutation_importance(const Booster& model, const Matrix& X_test, std::span<const int> y_test,
                                         std::span<const std::string> names = {}, std::size_t n_repeats = 10,
                                         std::uint64_t seed = 0, std::size_t threads = 1);

// `rank,feature,index,mean,dispersion`; top_k = 0 writes every row.
void write_attribution_csv(std::ostream& out, const AttributionReport& report, std::size_t top_k = 0);

}  // namespace xenorisk::model
