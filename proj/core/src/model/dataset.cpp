#include "xenorisk/model/dataset.hpp"

#include <algorithm>

namespace xenorisk::model {

Matrix select(const Matrix& m, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double* src = m.values.data() + rows[r] * m.cols;
    double* dst = out.values.data() + r * out.cols;
    for (std::size_t c = 0; c < cols.size(); ++c) dst[c] = src[cols[c]];
  }
  return out;
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = m.row(rows[r]);
    std::copy(src.begin(), src.end(), out.values.begin() + static_cast<std::ptrdiff_t>(r * m.cols));
  }
  return out;
}

}  // namespace xenorisk::model
