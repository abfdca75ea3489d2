#include "xenorisk/model/booster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "xenorisk/common/error.hpp"
#include "xenorisk/common/rng.hpp"

namespace xenorisk::model {
namespace {

constexpr char kMagic[4] = {'X', 'R', 'G', 'B'};
constexpr std::uint32_t kVersion = 1;
constexpr double kMinHessian = 1e-16;

static_assert(std::endian::native == std::endian::little, "model IO assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DataError("truncated model file");
  return v;
}

double leaf_weight(double g, double h, const BoosterParams& p) { return -g / (h + p.reg_lambda); }

double score(double g, double h, double lambda) { return g * g / (h + lambda); }

}  // namespace

double sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

double Tree::predict(const double* x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[n.feature] > n.threshold ? n.right : n.left);
  }
  return nodes[i].value;
}

std::size_t Tree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes[i].feature >= 0) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return best;
}

double Booster::margin(std::span<const double> x) const {
  double m = base_score;
  for (const auto& t : trees) m += t.predict(x.data());
  return m;
}

double Booster::probability(std::span<const double> x) const { return sigmoid(margin(x)); }

std::vector<double> Booster::predict_proba(const Matrix& X) const {
  if (X.cols != n_features) throw ValidationError("feature count does not match the model");
  std::vector<double> out(X.rows);
  for (std::size_t r = 0; r < X.rows; ++r) out[r] = probability(X.row(r));
  return out;
}

std::vector<int> Booster::predict(const Matrix& X, double threshold) const {
  const auto p = predict_proba(X);
  std::vector<int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] > threshold ? 1 : 0;
  return out;
}

std::vector<std::size_t> Booster::used_features() const {
  std::vector<std::size_t> used;
  for (const auto& t : trees) {
    for (const auto& n : t.nodes) {
      if (n.feature >= 0) used.push_back(static_cast<std::size_t>(n.feature));
    }
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  return used;
}

void Booster::write(std::ostream& out) const {
  nlohmann::ordered_json h;
  h["base_score"] = base_score;
  h["n_features"] = n_features;
  h["n_trees"] = trees.size();
  h["params"] = {{"learning_rate", params.learning_rate},       {"min_split_loss", params.min_split_loss},
                 {"colsample_bytree", params.colsample_bytree}, {"reg_lambda", params.reg_lambda},
                 {"min_child_weight", params.min_child_weight}, {"max_depth", params.max_depth}};
  const std::string header = h.dump();
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint64_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& t : trees) {
    put(out, static_cast<std::uint32_t>(t.nodes.size()));
    for (const auto& n : t.nodes) {
      put(out, n.feature);
      put(out, n.left);
      put(out, n.right);
      put(out, n.threshold);
      put(out, n.value);
    }
  }
}

Booster Booster::read(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a model file");
  if (take<std::uint32_t>(in) != kVersion) throw DataError("unsupported model version");
  const auto len = take<std::uint64_t>(in);
  if (len > (1u << 24)) throw DataError("corrupt model header");
  std::string header(len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(len))) throw DataError("truncated model header");

  Booster b;
  std::size_t n_trees = 0;
  try {
    const auto h = nlohmann::json::parse(header);
    b.base_score = h.at("base_score").get<double>();
    b.n_features = h.at("n_features").get<std::size_t>();
    n_trees = h.at("n_trees").get<std::size_t>();
    const auto& p = h.at("params");
    b.params.learning_rate = p.at("learning_rate").get<double>();
    b.params.min_split_loss = p.at("min_split_loss").get<double>();
    b.params.colsample_bytree = p.at("colsample_bytree").get<double>();
    b.params.reg_lambda = p.at("reg_lambda").get<double>();
    b.params.min_child_weight = p.at("min_child_weight").get<double>();
    b.params.max_depth = p.at("max_depth").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt model header: ") + e.what());
  }
  b.trees.resize(n_trees);
  for (auto& t : b.trees) {
    const auto n = take<std::uint32_t>(in);
    if (n == 0) throw DataError("model contains an empty tree");
    t.nodes.resize(n);
    for (auto& node : t.nodes) {
      node.feature = take<std::int32_t>(in);
      node.left = take<std::int32_t>(in);
      node.right = take<std::int32_t>(in);
      node.threshold = take<double>(in);
      node.value = take<double>(in);
    }
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      const auto& node = t.nodes[i];
      if (node.feature < 0) continue;
      const auto bad = [&](std::int32_t c) { return c <= static_cast<std::int32_t>(i) || c >= static_cast<std::int32_t>(n); };
      if (static_cast<std::size_t>(node.feature) >= b.n_features || bad(node.left) || bad(node.right)) {
        throw DataError("corrupt tree structure in model file");
      }
    }
  }
  return b;
}

void Booster::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model: " + path.string());
  write(out);
}

Booster Booster::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model: " + path.string());
  return read(in);
}

BoosterTrainer::BoosterTrainer(const BinnedMatrix& X, const BinCuts& cuts, std::vector<int> y,
                               const BoosterParams& params, std::uint64_t seed)
    : X_(X), cuts_(cuts), y_(std::move(y)), params_(params), seed_(seed) {
  if (y_.size() != X_.rows) throw ValidationError("label count does not match the training rows");
  if (cuts_.features() != X_.cols) throw ValidationError("bin cuts do not match the training columns");
  if (params_.max_depth < 1) throw ValidationError("max_depth must be at least 1");
  if (!(params_.colsample_bytree > 0.0 && params_.colsample_bytree <= 1.0)) {
    throw ValidationError("column subsample must lie in (0, 1]");
  }
  std::size_t pos = 0;
  for (const int v : y_) {
    if (v != 0 && v != 1) throw ValidationError("labels must be 0 or 1");
    pos += static_cast<std::size_t>(v);
  }
  if (pos == 0 || pos == y_.size()) throw DataError("training data contains a single class");
  const double prior = static_cast<double>(pos) / static_cast<double>(y_.size());
  booster_.base_score = std::log(prior / (1.0 - prior));
  booster_.n_features = X_.cols;
  booster_.params = params_;
  margins_.assign(X_.rows, booster_.base_score);
  grad_.resize(X_.rows);
  order_.resize(X_.rows);
  scratch_.resize(X_.rows);
}

BoosterTrainer::Histogram BoosterTrainer::acquire() {
  if (pool_.empty()) return Histogram(hist_size_);
  Histogram h = std::move(pool_.back());
  pool_.pop_back();
  h.assign(hist_size_, GradPair{});
  return h;
}

void BoosterTrainer::release(Histogram h) {
  if (!h.empty()) pool_.push_back(std::move(h));
}

void BoosterTrainer::build_histogram(std::size_t begin, std::size_t end, Histogram& hist) const {
  const std::uint32_t* rows = order_.data();
  for (std::size_t j = 0; j < sampled_.size(); ++j) {
    const std::uint8_t* col = X_.column(sampled_[j]);
    GradPair* h = hist.data() + hist_offset_[j];
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t r = rows[i];
      GradPair& cell = h[col[r]];
      cell.g += grad_[r].g;
      cell.h += grad_[r].h;
    }
  }
}

std::int32_t BoosterTrainer::grow(Tree& tree, std::size_t begin, std::size_t end, int depth, Histogram hist,
                                  GradPair total) {
  const auto self = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.emplace_back();

  const double mcw = params_.min_child_weight;
  const double lambda = params_.reg_lambda;
  const bool splittable = depth < params_.max_depth && total.h >= 2.0 * mcw && end - begin >= 2;

  std::size_t best_j = 0;
  std::size_t best_bin = 0;
  double best_gain = 0.0;
  GradPair best_left;
  bool found = false;
  if (splittable) {
    if (hist.empty()) {
      hist = acquire();
      build_histogram(begin, end, hist);
    }
    const double parent = score(total.g, total.h, lambda);
    for (std::size_t j = 0; j < sampled_.size(); ++j) {
      const std::size_t nb = cuts_.n_bins(sampled_[j]);
      const GradPair* h = hist.data() + hist_offset_[j];
      GradPair left;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        left.g += h[b].g;
        left.h += h[b].h;
        const double rh = total.h - left.h;
        if (left.h < mcw) continue;
        if (rh < mcw) break;
        const double gain =
            0.5 * (score(left.g, left.h, lambda) + score(total.g - left.g, rh, lambda) - parent) -
            params_.min_split_loss;
        if (gain > best_gain) {
          best_gain = gain;
          best_j = j;
          best_bin = b;
          best_left = left;
          found = true;
        }
      }
    }
  }

  if (!found) {
    release(std::move(hist));
    const double value = leaf_weight(total.g, total.h, params_) * params_.learning_rate;
    tree.nodes[static_cast<std::size_t>(self)].value = value;
    for (std::size_t i = begin; i < end; ++i) margins_[order_[i]] += value;
    return self;
  }

  const std::size_t feature = sampled_[best_j];
  const std::uint8_t* col = X_.column(feature);
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const std::uint32_t r = order_[i];
    if (col[r] <= best_bin) {
      order_[begin + n_left++] = r;
    } else {
      scratch_[n_right++] = r;
    }
  }
  std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(n_right),
            order_.begin() + static_cast<std::ptrdiff_t>(begin + n_left));
  const std::size_t mid = begin + n_left;
  const GradPair right_total{total.g - best_left.g, total.h - best_left.h};

  Histogram left_hist;
  Histogram right_hist;
  if (depth + 1 < params_.max_depth) {
    // build the smaller child, derive the larger one by subtraction
    const bool left_small = n_left <= n_right;
    Histogram small = acquire();
    if (left_small) {
      build_histogram(begin, mid, small);
    } else {
      build_histogram(mid, end, small);
    }
    for (std::size_t k = 0; k < hist_size_; ++k) {
      hist[k].g -= small[k].g;
      hist[k].h -= small[k].h;
    }
    left_hist = left_small ? std::move(small) : std::move(hist);
    right_hist = left_small ? std::move(hist) : std::move(small);
  } else {
    release(std::move(hist));
  }

  TreeNode& node = tree.nodes[static_cast<std::size_t>(self)];
  node.feature = static_cast<std::int32_t>(feature);
  node.threshold = cuts_.cuts[feature][best_bin];
  const std::int32_t l = grow(tree, begin, mid, depth + 1, std::move(left_hist), best_left);
  const std::int32_t r = grow(tree, mid, end, depth + 1, std::move(right_hist), right_total);
  tree.nodes[static_cast<std::size_t>(self)].left = l;
  tree.nodes[static_cast<std::size_t>(self)].right = r;
  return self;
}

const Tree& BoosterTrainer::add_round() {
  const std::size_t round = booster_.trees.size();
  Rng rng(derive_seed(seed_, {static_cast<std::uint64_t>(round)}));
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(params_.colsample_bytree * static_cast<double>(X_.cols))), 1, X_.cols);
  sampled_ = sample_without_replacement(X_.cols, k, rng);
  hist_offset_.resize(sampled_.size());
  hist_size_ = 0;
  for (std::size_t j = 0; j < sampled_.size(); ++j) {
    hist_offset_[j] = hist_size_;
    hist_size_ += cuts_.n_bins(sampled_[j]);
  }
  pool_.clear();

  GradPair total;
  for (std::size_t r = 0; r < X_.rows; ++r) {
    const double p = sigmoid(margins_[r]);
    grad_[r] = {p - static_cast<double>(y_[r]), std::max(p * (1.0 - p), kMinHessian)};
    total.g += grad_[r].g;
    total.h += grad_[r].h;
    order_[r] = static_cast<std::uint32_t>(r);
  }
  Tree tree;
  grow(tree, 0, X_.rows, 0, {}, total);
  booster_.trees.push_back(std::move(tree));
  return booster_.trees.back();
}

}  // namespace xenorisk::model
