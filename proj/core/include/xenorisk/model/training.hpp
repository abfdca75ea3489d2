#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xenorisk/model/booster.hpp"
#include "xenorisk/model/dataset.hpp"

namespace xenorisk::model {

struct TrainConfig {
  double learning_rate = 0.1;
  double min_split_loss = 0.1;
  double column_subsample = 0.8;
  double reg_lambda = 1.0;
  std::vector<int> max_depth_grid{3, 6, 9};
  std::vector<double> min_child_weight_grid{1.0, 3.0, 5.0};
  std::size_t n_rounds = 200;
  std::size_t patience = 20;  // rounds without CV log-loss improvement before stopping
  std::size_t cv_folds = 5;
  double test_fraction = 0.2;
  std::size_t max_bins = 64;
  // A boosted grid point is kept only when its out-of-fold log-loss beats the
  // intercept-only model by at least this paired z-score; otherwise it
  // predicts the training prior.
  double null_gate_z = 3.0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  // Throws ValidationError for an empty grid, folds < 2 or out-of-range rates.
  void validate() const;
};

struct GridPointResult {
  int max_depth = 0;
  double min_child_weight = 0.0;
  std::size_t best_round = 0;  // 0 = no round improved on the intercept
  double cv_logloss = 0.0;     // out-of-fold mean at best_round
  double null_logloss = 0.0;   // out-of-fold mean of the intercept-only model
  double gate_z = 0.0;
  bool accepted = false;
  double cv_macro_f1 = 0.0;
  double cv_accuracy = 0.0;
};

struct TrainedModel {
  Booster booster;  // no trees when the chosen grid point was not accepted
  std::vector<GridPointResult> grid;  // max_depth-major grid order
  std::size_t chosen = 0;

  const GridPointResult& chosen_point() const { return grid[chosen]; }
};

// Grid search over (max_depth, min_child_weight) by stratified k-fold CV on
// the given training rows. Folds advance in lockstep so early stopping sees
// the pooled out-of-fold log-loss; the grid point with the highest CV
// macro-F1 (first in grid order on ties) is refit on all rows for its best
// round count. Throws DataError when y holds a single class.
TrainedModel train_gbdt(const Matrix& X, std::span<const int> y, const TrainConfig& config);

// Mean logistic loss of margins against 0/1 labels.
double mean_logloss(std::span<const double> margins, std::span<const int> y);
double logloss(double margin, int y);

}  // namespace xenorisk::model
