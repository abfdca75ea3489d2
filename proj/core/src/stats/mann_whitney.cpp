#include "xenorisk/stats/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "xenorisk/common/error.hpp"

namespace xenorisk::stats {
namespace {

struct Ranked {
  std::vector<std::int64_t> doubled_ranks;  // 2 * midrank, integral
  double tie_term = 0.0;                    // sum of t^3 - t over tie groups
};

// Midranks of the pooled sample; entries [0, na) belong to a.
Ranked rank_pooled(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> v(n);
  std::copy(a.begin(), a.end(), v.begin());
  std::copy(b.begin(), b.end(), v.begin() + static_cast<std::ptrdiff_t>(a.size()));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });

  Ranked r;
  r.doubled_ranks.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // ranks i+1 .. j+1, doubled midrank = i + j + 2
    const auto d = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) r.doubled_ranks[order[k]] = d;
    const double t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  return r;
}

// P(|2U - n1 n2| >= |2U_obs - n1 n2|) over all equally likely assignments of
// the pooled doubled ranks to a sample of size n1.
double exact_two_sided(const std::vector<std::int64_t>& doubled, std::size_t n1, std::int64_t doubled_rank_sum_a) {
  const std::int64_t max_sum = std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
  const std::size_t width = static_cast<std::size_t>(max_sum) + 1;
  // ways[k * width + s]: subsets of size k with doubled-rank sum s
  std::vector<double> ways((n1 + 1) * width, 0.0);
  ways[0] = 1.0;
  std::size_t seen = 0;
  for (const std::int64_t d : doubled) {
    ++seen;
    for (std::size_t k = std::min(seen, n1); k >= 1; --k) {
      double* dst = &ways[k * width];
      const double* src = &ways[(k - 1) * width];
      for (std::size_t s = width; s-- > static_cast<std::size_t>(d);) dst[s] += src[s - static_cast<std::size_t>(d)];
    }
  }
  const auto nn1 = static_cast<std::int64_t>(n1);
  const auto nn2 = static_cast<std::int64_t>(doubled.size() - n1);
  // 2U = doubled_rank_sum - n1 (n1 + 1); centre of 2U is n1 n2
  const std::int64_t offset = nn1 * (nn1 + 1);
  const std::int64_t centre = nn1 * nn2;
  const std::int64_t observed = std::llabs(doubled_rank_sum_a - offset - centre);
  double extreme = 0.0;
  double total = 0.0;
  const double* row = &ways[n1 * width];
  for (std::size_t s = 0; s < width; ++s) {
    if (row[s] == 0.0) continue;
    total += row[s];
    if (std::llabs(static_cast<std::int64_t>(s) - offset - centre) >= observed) extreme += row[s];
  }
  return std::min(1.0, extreme / total);
}

}  // namespace

std::string_view to_string(PMethod m) { return m == PMethod::Exact ? "exact" : "normal"; }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("Mann-Whitney U needs two non-empty samples");
  const auto has_nan = [](std::span<const double> s) {
    return std::any_of(s.begin(), s.end(), [](double x) { return std::isnan(x); });
  };
  if (has_nan(a) || has_nan(b)) throw ValidationError("Mann-Whitney U input contains NaN");

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const Ranked ranked = rank_pooled(a, b);
  std::int64_t doubled_sum_a = 0;
  for (std::size_t i = 0; i < a.size(); ++i) doubled_sum_a += ranked.doubled_ranks[i];

  UTestResult r;
  r.u_a = static_cast<double>(doubled_sum_a) / 2.0 - n1 * (n1 + 1.0) / 2.0;
  r.u_b = n1 * n2 - r.u_a;

  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)));
  const double diff = r.u_a - mu;
  const double corrected = std::max(0.0, std::fabs(diff) - 0.5);
  // a fully tied pool has zero variance and no evidence either way
  r.z = var > 0.0 && corrected > 0.0 ? std::copysign(corrected / std::sqrt(var), diff) : 0.0;
  r.p_normal = std::min(1.0, 2.0 * normal_sf(std::fabs(r.z)));

  if (a.size() + b.size() <= kExactMaxTotal) {
    r.p = exact_two_sided(ranked.doubled_ranks, a.size(), doubled_sum_a);
    r.method = PMethod::Exact;
  } else {
    r.p = r.p_normal;
    r.method = PMethod::Normal;
  }
  return r;
}

}  // namespace xenorisk::stats
