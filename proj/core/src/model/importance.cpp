#include "xenorisk/model/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/common/text.hpp"
#include "xenorisk/model/metrics.hpp"

namespace xenorisk::model {
namespace {

// Tree output for x with x[feature] replaced by `value`.
double predict_with(const Tree& t, const double* x, std::size_t feature, double value) {
  std::size_t i = 0;
  while (t.nodes[i].feature >= 0) {
    const TreeNode& n = t.nodes[i];
    const auto f = static_cast<std::size_t>(n.feature);
    const double v = f == feature ? value : x[f];
    i = static_cast<std::size_t>(v > n.threshold ? n.right : n.left);
  }
  return t.nodes[i].value;
}

bool uses(const Tree& t, std::size_t feature) {
  return std::any_of(t.nodes.begin(), t.nodes.end(),
                     [&](const TreeNode& n) { return n.feature == static_cast<std::int32_t>(feature); });
}

}  // namespace

AttributionReport permutation_importance(const Booster& model, const Matrix& X_test, std::span<const int> y_test,
                                         std::span<const std::string> names, std::size_t n_repeats,
                                         std::uint64_t seed, std::size_t threads) {
  if (X_test.rows == 0) throw ValidationError("cannot compute importance on an empty test set");
  if (X_test.rows != y_test.size()) throw ValidationError("label count does not match the test rows");
  if (X_test.cols != model.n_features) throw ValidationError("feature count does not match the model");
  if (!names.empty() && names.size() != X_test.cols) throw ValidationError("feature name count does not match");
  if (n_repeats == 0) throw ValidationError("importance needs at least one repeat");

  const std::size_t n = X_test.rows;
  const std::size_t n_trees = model.trees.size();
  // per_tree[t * n + r]: output of tree t on row r
  std::vector<double> per_tree(n_trees * n);
  std::vector<double> base(n, model.base_score);
  for (std::size_t t = 0; t < n_trees; ++t) {
    for (std::size_t r = 0; r < n; ++r) {
      per_tree[t * n + r] = model.trees[t].predict(X_test.row(r).data());
      base[r] += per_tree[t * n + r];
    }
  }
  const auto labels_of = [](const std::vector<double>& m) {
    std::vector<int> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] > 0.0 ? 1 : 0;
    return out;
  };

  AttributionReport report;
  report.baseline_macro_f1 = evaluate(y_test, labels_of(base)).macro_f1;
  report.n_repeats = n_repeats;
  report.seed = seed;
  report.ranked.resize(X_test.cols);
  for (std::size_t f = 0; f < X_test.cols; ++f) {
    report.ranked[f].index = f;
    report.ranked[f].feature = names.empty() ? std::to_string(f) : names[f];
  }

  const auto used = model.used_features();
  parallel_for(used.size(), threads, [&](std::size_t k) {
    const std::size_t f = used[k];
    std::vector<std::size_t> trees;
    for (std::size_t t = 0; t < n_trees; ++t) {
      if (uses(model.trees[t], f)) trees.push_back(t);
    }
    std::vector<double> drops(n_repeats);
    std::vector<std::size_t> perm(n);
    std::vector<double> margins(n);
    for (std::size_t rep = 0; rep < n_repeats; ++rep) {
      std::iota(perm.begin(), perm.end(), 0);
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(rep)}));
      for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
      for (std::size_t r = 0; r < n; ++r) {
        const double* x = X_test.row(r).data();
        const double v = X_test.at(perm[r], f);
        double m = base[r];
        for (const std::size_t t : trees) m += predict_with(model.trees[t], x, f, v) - per_tree[t * n + r];
        margins[r] = m;
      }
      drops[rep] = report.baseline_macro_f1 - evaluate(y_test, labels_of(margins)).macro_f1;
    }
    const double mean = std::accumulate(drops.begin(), drops.end(), 0.0) / static_cast<double>(n_repeats);
    double ss = 0.0;
    for (const double d : drops) ss += (d - mean) * (d - mean);
    report.ranked[f].mean = mean;
    report.ranked[f].dispersion = n_repeats > 1 ? std::sqrt(ss / static_cast<double>(n_repeats - 1)) : 0.0;
  });

  std::sort(report.ranked.begin(), report.ranked.end(), [](const FeatureImportance& a, const FeatureImportance& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.index < b.index;
  });
  return report;
}

void write_attribution_csv(std::ostream& out, const AttributionReport& report, std::size_t top_k) {
  csv::write_row(out, {"rank", "feature", "index", "mean", "dispersion"});
  const std::size_t n = top_k ? std::min(top_k, report.ranked.size()) : report.ranked.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = report.ranked[i];
    csv::write_row(out, {std::to_string(i + 1), r.feature, std::to_string(r.index), text::format_double(r.mean),
                         text::format_double(r.dispersion)});
  }
}

}  // namespace xenorisk::model
