#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace xenorisk::model {

// Binary labels are 0 (negative) and 1 (positive).
struct ClassMetrics {
  double precision = 0.0;  // 0 when the class is never predicted
  double recall = 0.0;     // 0 when the class is absent
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

// macro_f1 and accuracy are percentages; per_class[k] describes label k.
struct Evaluation {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::array<ClassMetrics, 2> per_class{};
  Confusion confusion;
};

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred);
// Throws ValidationError for an empty confusion matrix.
Evaluation evaluate(const Confusion& c);
// Throws ValidationError for empty or mismatched inputs or labels outside {0, 1}.
Evaluation evaluate(std::span<const int> y_true, std::span<const int> y_pred);

struct Baseline {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  int majority_label = 0;  // ties resolve to 0
};

// Constant prediction of the most frequent label.
Baseline majority_baseline(std::span<const int> y);

// Macro-F1 (percent) of a constant predictor whose accuracy is
// `accuracy_percent`: 100 p / (1 + p) with p = accuracy_percent / 100.
double majority_macro_f1(double accuracy_percent);

}  // namespace xenorisk::model
