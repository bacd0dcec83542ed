#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "dnsnmf/error.hpp"

namespace dnsnmf {

using index_t = std::int64_t;

/// Dense rectangular matrix of doubles, row-major storage.
///
/// This is the universal carrier for data matrices, factors, smoothing
/// matrices and all derived products. Values are owned; copies are deep.
class DenseMatrix {
 public:
  /// Empty matrix (0x0). Only assignment and shape queries are valid.
  DenseMatrix() = default;

  /// rows x cols matrix, zero-filled. rows and cols must be >= 1.
  DenseMatrix(index_t rows, index_t cols);

  /// rows x cols matrix adopting `values` (row-major, length rows*cols).
  DenseMatrix(index_t rows, index_t cols, std::vector<double> values);

  static DenseMatrix identity(index_t n);
  static DenseMatrix constant(index_t rows, index_t cols, double value);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }
  index_t size() const noexcept { return rows_ * cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(index_t i, index_t j) noexcept { return values_[i * cols_ + j]; }
  double operator()(index_t i, index_t j) const noexcept { return values_[i * cols_ + j]; }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool same_shape(const DenseMatrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  bool all_finite() const noexcept;
  bool all_nonnegative() const noexcept;

  double min() const;
  double max() const;
  double sum() const;
  double mean() const;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> values_;
};

/// Bitwise equality of shape and values (distinguishes 0.0 from -0.0).
bool operator==(const DenseMatrix& a, const DenseMatrix& b);
inline bool operator!=(const DenseMatrix& a, const DenseMatrix& b) { return !(a == b); }

namespace detail {
inline void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* where) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(where) + ": shape mismatch (" + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()) + ")");
  }
}
}  // namespace detail

}  // namespace dnsnmf
