#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace xenorisk::stats {

enum class PMethod { Exact, Normal };

std::string_view to_string(PMethod m);

struct UTestResult {
  double u_a = 0.0;  // rank sum of a minus |a|(|a|+1)/2
  double u_b = 0.0;  // u_a + u_b == |a| * |b|
  double z = 0.0;    // normal approximation, tie-corrected, continuity-corrected; sign of u_a - mean
  double p = 1.0;    // two-sided, from `method`
  double p_normal = 1.0;  // two-sided normal-approximation p, always reported
  PMethod method = PMethod::Normal;
};

// Samples with |a| + |b| at or below this size get an exact permutation p.
inline constexpr std::size_t kExactMaxTotal = 30;

// Two-sided Mann-Whitney U test with midranks for ties. Throws
// ValidationError when either sample is empty or holds a NaN. When every
// value is identical, z = 0 and p = 1.
UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Standard normal upper tail P(Z > x).
double normal_sf(double x);

}  // namespace xenorisk::stats
