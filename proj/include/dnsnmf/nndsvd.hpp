#pragma once

#include <cstdint>

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// Nonnegative starting pair z0 (p x r), h0 (r x n).
struct InitPair {
  DenseMatrix z0;
  DenseMatrix h0;
  /// Components that had to be filled with seeded noise because the input
  /// ran out of numerical rank.
  int noise_filled_components = 0;
};

/// Nonnegative Double SVD initialization.
///
/// Each leading singular pair contributes the dominant (larger mass)
/// same-sign sections of its vectors, scaled so the component reproduces
/// sigma_j * u_j v_j^T as closely as a nonnegative pair can. Components past
/// the numerical rank are filled with seeded positive noise of mean
/// mean(x) * 1e-2. Entries below `floor` are raised to `floor`; pass a
/// positive floor for multiplicative-update solvers, which cannot leave
/// exact zeros.
InitPair nndsvd(const DenseMatrix& x, index_t r, double floor, std::uint64_t noise_seed = 0);

}  // namespace dnsnmf
