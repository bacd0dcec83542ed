#pragma once

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// Parameters of the smoothing matrix S = (1 - theta) I + (theta / r) 11^T.
/// theta = 0 gives the identity (plain NMF); larger theta spreads each
/// component over all r directions, which forces sparseness onto the factors
/// surrounding S.
struct SmoothingSpec {
  double theta = 0.0;
  index_t r = 1;
};

/// Materializes S (r x r). Symmetric, doubly stochastic, entrywise positive
/// for theta > 0. Throws ParameterError for theta outside [0, 1] or r < 1.
DenseMatrix smoothing_matrix(const SmoothingSpec& spec);

}  // namespace dnsnmf
