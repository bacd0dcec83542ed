#include "dnsnmf/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace dnsnmf {

namespace {
void check_shape(index_t rows, index_t cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("DenseMatrix: rows and cols must be >= 1, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
}
}  // namespace

DenseMatrix::DenseMatrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  values_.assign(static_cast<std::size_t>(rows * cols), 0.0);
}

DenseMatrix::DenseMatrix(index_t rows, index_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  check_shape(rows, cols);
  if (static_cast<index_t>(values_.size()) != rows * cols) {
    throw DimensionError("DenseMatrix: data length " + std::to_string(values_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

DenseMatrix DenseMatrix::identity(index_t n) {
  DenseMatrix m(n, n);
  for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::constant(index_t rows, index_t cols, double value) {
  DenseMatrix m(rows, cols);
  std::fill(m.values_.begin(), m.values_.end(), value);
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const index_t r = static_cast<index_t>(rows.size());
  if (r == 0) throw DimensionError("DenseMatrix::from_rows: empty row list");
  const index_t c = static_cast<index_t>(rows.begin()->size());
  DenseMatrix m(r, c);
  index_t i = 0;
  for (const auto& row : rows) {
    if (static_cast<index_t>(row.size()) != c) {
      throw DimensionError("DenseMatrix::from_rows: ragged rows");
    }
    index_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool DenseMatrix::all_nonnegative() const noexcept {
  for (double v : values_) {
    if (!(v >= 0.0)) return false;  // also rejects NaN
  }
  return true;
}

double DenseMatrix::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double DenseMatrix::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double DenseMatrix::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double DenseMatrix::mean() const {
  return sum() / static_cast<double>(size());
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) return false;
  if (a.empty()) return true;
  return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace dnsnmf
