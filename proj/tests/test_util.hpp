#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/rng.hpp"

namespace testutil {

inline dnsnmf::DenseMatrix random_matrix(dnsnmf::index_t rows, dnsnmf::index_t cols,
                                         dnsnmf::Rng& rng, double lo, double hi) {
  dnsnmf::DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

inline dnsnmf::DenseMatrix random_nonneg(dnsnmf::index_t rows, dnsnmf::index_t cols,
                                         dnsnmf::Rng& rng) {
  return random_matrix(rows, cols, rng, 0.0, 1.0);
}

inline double max_abs_diff(const dnsnmf::DenseMatrix& a, const dnsnmf::DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

}  // namespace testutil
