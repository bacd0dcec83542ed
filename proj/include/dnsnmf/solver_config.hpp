#pragma once

#include <cstdint>

namespace dnsnmf {

enum class InitKind {
  nndsvd,  ///< SVD-based nonnegative init (default)
  random,  ///< seeded uniform positive entries
};

/// Tolerances, iteration caps, seeds and safety factors shared by the MU and
/// APG loops. One instance configures one factorization call; experiments
/// carry separate instances for pre-training and fine-tuning.
struct SolverConfig {
  // MU sweeps (shallow factorizations, pre-training).
  double tol = 1e-5;  ///< relative objective change per sweep
  int max_iter = 500;

  // APG block solves.
  double inner_tol = 1e-6;  ///< relative iterate change
  int max_inner_iter = 50;

  // Fine-tuning sweeps.
  double outer_tol = 1e-5;  ///< relative objective change per sweep
  int max_sweeps = 200;

  std::uint64_t seed = 0;
  InitKind init = InitKind::nndsvd;

  /// Power iteration underestimates spectral norms, and an underestimated
  /// Lipschitz constant breaks the APG descent guarantee; every estimate that
  /// feeds a step size is inflated by this factor.
  double lipschitz_safety = 1.01;

  /// Additive denominator floor in multiplicative updates.
  double mu_eps = 1e-12;
};

}  // namespace dnsnmf
