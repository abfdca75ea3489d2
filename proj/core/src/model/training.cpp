#include "xenorisk/model/training.hpp"

#include <cmath>
#include <limits>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/model/metrics.hpp"
#include "xenorisk/model/split.hpp"

namespace xenorisk::model {
namespace {

struct FoldData {
  std::vector<std::size_t> valid;
  BinCuts cuts;
  BinnedMatrix train_bins;
  std::vector<int> train_y;
  Matrix valid_x;
};

BoosterParams params_for(const TrainConfig& c, int depth, double mcw) {
  BoosterParams p;
  p.learning_rate = c.learning_rate;
  p.min_split_loss = c.min_split_loss;
  p.colsample_bytree = c.column_subsample;
  p.reg_lambda = c.reg_lambda;
  p.min_child_weight = mcw;
  p.max_depth = depth;
  return p;
}

double prior_margin(std::span<const int> y) {
  double pos = 0.0;
  for (const int v : y) pos += v;
  const double p = pos / static_cast<double>(y.size());
  return std::log(p / (1.0 - p));
}

std::vector<int> margins_to_labels(std::span<const double> m) {
  std::vector<int> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] > 0.0 ? 1 : 0;
  return out;
}

// Paired z-score of the per-sample log-loss reduction.
double paired_z(std::span<const double> base, std::span<const double> model, std::span<const int> y) {
  const std::size_t n = y.size();
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = logloss(base[i], y[i]) - logloss(model[i], y[i]);
    sum += d;
    sq += d * d;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = n > 1 ? (sq - sum * mean) / static_cast<double>(n - 1) : 0.0;
  if (var <= 0.0) return mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return mean / std::sqrt(var / static_cast<double>(n));
}

GridPointResult run_grid_point(const TrainConfig& config, std::size_t g, int depth, double mcw,
                               const std::vector<FoldData>& folds, std::span<const int> y) {
  const std::size_t n = y.size();
  const BoosterParams params = params_for(config, depth, mcw);
  std::vector<BoosterTrainer> trainers;
  trainers.reserve(folds.size());
  std::vector<double> oof(n);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    trainers.emplace_back(folds[f].train_bins, folds[f].cuts, folds[f].train_y, params,
                          derive_seed(config.seed, {hash_tag("cv"), g, f}));
    for (const std::size_t i : folds[f].valid) oof[i] = trainers.back().booster().base_score;
  }
  const std::vector<double> null_margins = oof;

  GridPointResult r;
  r.max_depth = depth;
  r.min_child_weight = mcw;
  r.null_logloss = mean_logloss(null_margins, y);
  r.cv_logloss = r.null_logloss;
  std::vector<double> best = oof;
  for (std::size_t round = 1; round <= config.n_rounds; ++round) {
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const Tree& tree = trainers[f].add_round();
      const auto& fd = folds[f];
      for (std::size_t k = 0; k < fd.valid.size(); ++k) oof[fd.valid[k]] += tree.predict(fd.valid_x.row(k).data());
    }
    const double loss = mean_logloss(oof, y);
    if (loss < r.cv_logloss) {
      r.cv_logloss = loss;
      r.best_round = round;
      best = oof;
    } else if (round - r.best_round >= config.patience) {
      break;
    }
  }

  r.gate_z = r.best_round > 0 ? paired_z(null_margins, best, y) : 0.0;
  r.accepted = r.best_round > 0 && r.gate_z >= config.null_gate_z;
  const auto eval = evaluate(y, margins_to_labels(r.accepted ? best : null_margins));
  r.cv_macro_f1 = eval.macro_f1;
  r.cv_accuracy = eval.accuracy;
  return r;
}

}  // namespace

double logloss(double margin, int y) {
  const double softplus = std::max(margin, 0.0) + std::log1p(std::exp(-std::fabs(margin)));
  return softplus - (y == 1 ? margin : 0.0);
}

double mean_logloss(std::span<const double> margins, std::span<const int> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += logloss(margins[i], y[i]);
  return s / static_cast<double>(y.size());
}

void TrainConfig::validate() const {
  if (max_depth_grid.empty() || min_child_weight_grid.empty()) throw ValidationError("hyper-parameter grid is empty");
  for (const int d : max_depth_grid) {
    if (d < 1) throw ValidationError("max_depth values must be at least 1");
  }
  for (const double w : min_child_weight_grid) {
    if (!(w >= 0.0)) throw ValidationError("min_child_weight values must be non-negative");
  }
  if (cv_folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(min_split_loss >= 0.0)) throw ValidationError("min_split_loss must be non-negative");
  if (!(column_subsample > 0.0 && column_subsample <= 1.0)) throw ValidationError("column subsample must lie in (0, 1]");
  if (!(reg_lambda >= 0.0)) throw ValidationError("reg_lambda must be non-negative");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ValidationError("test fraction must lie in (0, 1)");
  if (max_bins < 2 || max_bins > kMaxBins) throw ValidationError("max_bins must lie in [2, 256]");
}

TrainedModel train_gbdt(const Matrix& X, std::span<const int> y, const TrainConfig& config) {
  config.validate();
  if (X.rows != y.size()) throw ValidationError("label count does not match the feature rows");
  if (X.cols == 0) throw ValidationError("no feature columns");
  std::size_t pos = 0;
  for (const int v : y) {
    if (v != 0 && v != 1) throw ValidationError("labels must be 0 or 1");
    pos += static_cast<std::size_t>(v);
  }
  if (pos == 0 || pos == y.size()) throw DataError("training data contains a single class");
  if (std::min(pos, y.size() - pos) < config.cv_folds) {
    throw DataError("too few examples of the minority class for " + std::to_string(config.cv_folds) + "-fold CV");
  }

  const auto fold_idx = stratified_kfold(y, config.cv_folds, derive_seed(config.seed, {hash_tag("folds")}));
  std::vector<FoldData> folds(fold_idx.size());
  parallel_for(folds.size(), config.threads, [&](std::size_t f) {
    FoldData& fd = folds[f];
    fd.valid = fold_idx[f];
    const auto train = fold_complement(fd.valid, y.size());
    const Matrix train_x = select_rows(X, train);
    fd.cuts = compute_bin_cuts(train_x, config.max_bins);
    fd.train_bins = bin_matrix(train_x, fd.cuts);
    fd.train_y = gather(y, train);
    fd.valid_x = select_rows(X, fd.valid);
  });

  TrainedModel out;
  for (const int d : config.max_depth_grid) {
    for (const double w : config.min_child_weight_grid) out.grid.push_back({.max_depth = d, .min_child_weight = w});
  }
  parallel_for(out.grid.size(), config.threads, [&](std::size_t g) {
    out.grid[g] = run_grid_point(config, g, out.grid[g].max_depth, out.grid[g].min_child_weight, folds, y);
  });

  for (std::size_t g = 1; g < out.grid.size(); ++g) {
    if (out.grid[g].cv_macro_f1 > out.grid[out.chosen].cv_macro_f1) out.chosen = g;
  }

  const GridPointResult& c = out.chosen_point();
  if (c.accepted) {
    const BinCuts cuts = compute_bin_cuts(X, config.max_bins);
    const BinnedMatrix bins = bin_matrix(X, cuts);
    BoosterTrainer trainer(bins, cuts, {y.begin(), y.end()}, params_for(config, c.max_depth, c.min_child_weight),
                           derive_seed(config.seed, {hash_tag("refit")}));
    for (std::size_t r = 0; r < c.best_round; ++r) trainer.add_round();
    out.booster = trainer.booster();
  } else {
    out.booster.base_score = prior_margin(y);
    out.booster.n_features = X.cols;
    out.booster.params = params_for(config, c.max_depth, c.min_child_weight);
  }
  return out;
}

}  // namespace xenorisk::model
