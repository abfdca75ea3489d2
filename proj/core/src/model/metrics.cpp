#include "xenorisk/model/metrics.hpp"

#include "xenorisk/common/error.hpp"

namespace xenorisk::model {
namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

void check_labels(std::span<const int> y) {
  for (const int v : y) {
    if (v != 0 && v != 1) throw ValidationError("labels must be 0 or 1");
  }
}

}  // namespace

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw ValidationError("label and prediction counts differ");
  check_labels(y_true);
  check_labels(y_pred);
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1) {
      ++(y_pred[i] == 1 ? c.tp : c.fn);
    } else {
      ++(y_pred[i] == 1 ? c.fp : c.tn);
    }
  }
  return c;
}

Evaluation evaluate(const Confusion& c) {
  if (c.total() == 0) throw ValidationError("cannot evaluate an empty test set");
  Evaluation e;
  e.confusion = c;
  e.per_class[1] = class_metrics(c.tp, c.fp, c.fn);
  e.per_class[0] = class_metrics(c.tn, c.fn, c.fp);
  e.macro_f1 = 100.0 * (e.per_class[0].f1 + e.per_class[1].f1) / 2.0;
  e.accuracy = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  return e;
}

Evaluation evaluate(std::span<const int> y_true, std::span<const int> y_pred) {
  return evaluate(confusion(y_true, y_pred));
}

Baseline majority_baseline(std::span<const int> y) {
  if (y.empty()) throw ValidationError("majority baseline of an empty label set");
  check_labels(y);
  std::size_t ones = 0;
  for (const int v : y) ones += static_cast<std::size_t>(v);
  Baseline b;
  b.majority_label = ones > y.size() - ones ? 1 : 0;
  const std::size_t hits = b.majority_label ? ones : y.size() - ones;
  b.accuracy = 100.0 * static_cast<double>(hits) / static_cast<double>(y.size());
  b.macro_f1 = majority_macro_f1(b.accuracy);
  return b;
}

double majority_macro_f1(double accuracy_percent) {
  const double p = accuracy_percent / 100.0;
  return 100.0 * p / (1.0 + p);
}

}  // namespace xenorisk::model
