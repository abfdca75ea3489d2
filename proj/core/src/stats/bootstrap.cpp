#include "xenorisk/stats/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"

namespace xenorisk::stats {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of empty data");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BootstrapResult bootstrap_mean(std::span<const double> values, const BootstrapOptions& options) {
  if (values.empty()) throw ValidationError("bootstrap needs at least one value");
  if (options.n_resamples == 0) throw ValidationError("bootstrap needs at least one resample");
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw ValidationError("bootstrap confidence must lie in (0, 1)");
  }

  const std::size_t n = values.size();
  double total = 0.0;
  for (const double v : values) total += v;

  std::vector<double> means(options.n_resamples);
  parallel_for(options.n_resamples, options.threads, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(r)}));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[uniform_index(rng, n)];
    means[r] = s / static_cast<double>(n);
  });

  BootstrapResult out;
  out.mean = total / static_cast<double>(n);
  out.n_resamples = options.n_resamples;
  out.seed = options.seed;
  out.confidence = options.confidence;
  out.n_users = n;
  if (options.keep_distribution) out.distribution = means;
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - options.confidence) / 2.0;
  out.ci_low = quantile_sorted(means, tail);
  out.ci_high = quantile_sorted(means, 1.0 - tail);
  return out;
}

BootstrapResult bootstrap_percent_increase(std::span<const ActivityCounts> per_user, const BootstrapOptions& options) {
  std::vector<double> pct;
  pct.reserve(per_user.size());
  for (const auto& u : per_user) {
    if (u.pre == 0) continue;
    pct.push_back(100.0 * (static_cast<double>(u.post) - static_cast<double>(u.pre)) / static_cast<double>(u.pre));
  }
  if (pct.empty()) throw DataError("percent increase undefined: every user has zero pre-period tweets");
  auto out = bootstrap_mean(pct, options);
  out.n_excluded = per_user.size() - pct.size();
  return out;
}

std::vector<ActivityCounts> activity_counts(const corpus::Corpus& corpus, const corpus::PeriodSplit& split,
                                            std::span<const std::string> user_ids) {
  std::vector<ActivityCounts> out;
  out.reserve(user_ids.size());
  for (const auto& id : user_ids) {
    ActivityCounts c;
    for (const std::size_t idx : corpus.tweets_of(id)) {
      if (split.is_pre(corpus.tweets()[idx])) {
        ++c.pre;
      } else {
        ++c.post;
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace xenorisk::stats
