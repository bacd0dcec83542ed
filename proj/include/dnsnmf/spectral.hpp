#pragma once

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// Largest-singular-value estimate from power iteration.
struct SpectralNormEstimate {
  double value = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

/// Estimates ||a||_2 (largest singular value) by power iteration on a^T a,
/// with a deterministic seeded start vector. The estimate is a Rayleigh
/// quotient, so value <= ||a||_2 <= ||a||_F always holds.
///
/// Power iteration approaches the true norm from below; call sites that feed
/// the result into a Lipschitz step size must apply a safety factor (see
/// SolverConfig::lipschitz_safety).
SpectralNormEstimate spectral_norm(const DenseMatrix& a, double tol = 1e-9, int max_iter = 1000);

}  // namespace dnsnmf
