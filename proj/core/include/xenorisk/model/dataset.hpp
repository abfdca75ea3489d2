#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace xenorisk::model {

// Dense row-major design matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
  std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
};

Matrix select(const Matrix& m, std::span<const std::size_t> rows, std::span<const std::size_t> cols);
Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows);

template <typename T>
std::vector<T> gather(std::span<const T> v, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (const std::size_t i : idx) out.push_back(v[i]);
  return out;
}

}  // namespace xenorisk::model
