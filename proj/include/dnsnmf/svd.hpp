#pragma once

#include <vector>

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// Rank-k truncated SVD: a ~ u * diag(s) * v^T with orthonormal u (rows x k),
/// orthonormal v (cols x k) and s nonincreasing.
struct ThinSvd {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix v;
};

/// Thin SVD of a dense matrix by one-sided Jacobi rotations.
///
/// One-sided Jacobi is slow compared to bidiagonalization methods but is
/// simple and computes small singular values to high relative accuracy, which
/// is all the factorization-scale problems here need. Requires
/// 1 <= k <= min(rows, cols).
ThinSvd thin_svd(const DenseMatrix& a, index_t k);

}  // namespace dnsnmf
