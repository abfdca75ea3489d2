#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xenorisk/corpus/corpus.hpp"

namespace xenorisk::stats {

struct ActivityCounts {
  std::size_t pre = 0;
  std::size_t post = 0;
};

struct BootstrapOptions {
  std::size_t n_resamples = 1000;
  std::uint64_t seed = 0;
  double confidence = 0.95;
  std::size_t threads = 1;
  bool keep_distribution = false;
};

struct BootstrapResult {
  double mean = 0.0;  // statistic on the original sample
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_resamples = 0;
  std::uint64_t seed = 0;
  double confidence = 0.95;
  std::size_t n_users = 0;     // users contributing a value
  std::size_t n_excluded = 0;  // users dropped for pre == 0
  std::vector<double> distribution;  // resample means in resample order, when kept
};

// Percentile bootstrap of the mean of `values`. Resample r draws with
// replacement from a generator seeded by derive_seed(seed, {r}), so resample
// r is the same whatever n_resamples or the thread count. Throws
// ValidationError for empty input or n_resamples == 0.
BootstrapResult bootstrap_mean(std::span<const double> values, const BootstrapOptions& options = {});

// Mean over users of 100 * (post - pre) / pre. Users with pre == 0 are
// excluded and counted; throws DataError when every user is excluded.
BootstrapResult bootstrap_percent_increase(std::span<const ActivityCounts> per_user,
                                           const BootstrapOptions& options = {});

// Pre/post tweet counts of each listed user.
std::vector<ActivityCounts> activity_counts(const corpus::Corpus& corpus, const corpus::PeriodSplit& split,
                                            std::span<const std::string> user_ids);

// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace xenorisk::stats
