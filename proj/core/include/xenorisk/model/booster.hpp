#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "xenorisk/model/binning.hpp"
#include "xenorisk/model/dataset.hpp"

namespace xenorisk::model {

// Second-order boosting of regression trees on the logistic loss.
struct BoosterParams {
  double learning_rate = 0.1;
  double min_split_loss = 0.1;    // gain threshold for a split
  double colsample_bytree = 0.8;  // share of features offered to each tree
  double reg_lambda = 1.0;        // L2 penalty on leaf weights
  double min_child_weight = 1.0;  // minimum hessian sum per child
  int max_depth = 6;
};

// Internal nodes send x to `left` when x[feature] <= threshold (NaN goes left).
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  std::int32_t left = -1;
  std::int32_t right = -1;
  double threshold = 0.0;
  double value = 0.0;  // leaf output, already scaled by the learning rate
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const double* x) const;
  std::size_t depth() const;
};

class Booster {
 public:
  double base_score = 0.0;  // margin before any tree
  std::size_t n_features = 0;
  BoosterParams params;
  std::vector<Tree> trees;

  double margin(std::span<const double> x) const;
  double probability(std::span<const double> x) const;
  std::vector<double> predict_proba(const Matrix& X) const;
  // 1 when the probability exceeds `threshold`.
  std::vector<int> predict(const Matrix& X, double threshold = 0.5) const;
  // Sorted indices of features used by at least one split.
  std::vector<std::size_t> used_features() const;

  // Self-describing binary:
  //   "XRGB", u32 version (1), u64 header length, JSON header
  //   {base_score, n_features, n_trees, params}, then per tree a u32 node
  //   count followed by nodes as (i32 feature, i32 left, i32 right,
  //   f64 threshold, f64 value), all little-endian.
  void write(std::ostream& out) const;
  static Booster read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Booster load(const std::filesystem::path& path);
};

double sigmoid(double m);

// Incremental trainer: each add_round() grows one tree on the binned training
// data. Column sampling for round t uses derive_seed(seed, {t}).
class BoosterTrainer {
 public:
  // Throws DataError unless both labels occur in y.
  BoosterTrainer(const BinnedMatrix& X, const BinCuts& cuts, std::vector<int> y, const BoosterParams& params,
                 std::uint64_t seed);

  const Tree& add_round();
  const Booster& booster() const { return booster_; }
  std::span<const double> train_margins() const { return margins_; }

 private:
  struct GradPair {
    double g = 0.0;
    double h = 0.0;
  };
  using Histogram = std::vector<GradPair>;

  void build_histogram(std::size_t begin, std::size_t end, Histogram& hist) const;
  // An empty `hist` means the node's histogram has not been built.
  std::int32_t grow(Tree& tree, std::size_t begin, std::size_t end, int depth, Histogram hist, GradPair total);
  Histogram acquire();
  void release(Histogram h);

  const BinnedMatrix& X_;
  const BinCuts& cuts_;
  std::vector<int> y_;
  BoosterParams params_;
  std::uint64_t seed_;
  Booster booster_;
  std::vector<double> margins_;
  std::vector<GradPair> grad_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::size_t> sampled_;       // features offered to the current tree
  std::vector<std::size_t> hist_offset_;   // per sampled feature
  std::size_t hist_size_ = 0;
  std::vector<Histogram> pool_;
};

}  // namespace xenorisk::model
