#include <benchmark/benchmark.h>

#include <random>

#include "xenorisk/model/training.hpp"

using namespace xenorisk;

namespace {

// rows x cols with the label carried by the first two columns
void make_data(std::size_t rows, std::size_t cols, model::Matrix& X, std::vector<int>& y) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  X = model::Matrix(rows, cols);
  y.assign(rows, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < cols; ++c) X.at(i, c) = nd(rng);
    y[i] = X.at(i, 0) + 0.5 * X.at(i, 1) + 0.5 * nd(rng) > 0 ? 1 : 0;
  }
}

void BM_TrainGbdtSinglePoint(benchmark::State& state) {
  model::Matrix X;
  std::vector<int> y;
  make_data(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), X, y);
  model::TrainConfig cfg;
  cfg.max_depth_grid = {6};
  cfg.min_child_weight_grid = {1.0};
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(model::train_gbdt(X, y, cfg));
}
BENCHMARK(BM_TrainGbdtSinglePoint)->Args({1000, 100})->Args({1600, 800})->Unit(benchmark::kMillisecond);

}  // namespace
