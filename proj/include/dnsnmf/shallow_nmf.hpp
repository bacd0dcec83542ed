#pragma once

#include <optional>
#include <vector>

#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/nndsvd.hpp"
#include "dnsnmf/smoothing.hpp"
#include "dnsnmf/solver_config.hpp"

namespace dnsnmf {

/// Result of a single-layer factorization X ~ Z H, or X ~ Z S H when
/// `smoothing` is set. objective_trace[0] is the objective at the starting
/// point and one entry is appended per completed sweep; the trace is
/// nonincreasing up to the multiplicative-update epsilon.
struct ShallowFactorization {
  DenseMatrix z;
  DenseMatrix h;
  std::optional<SmoothingSpec> smoothing;
  std::vector<double> objective_trace;
};

/// Seeded uniform positive starting pair, scaled so z0 * h0 matches the data
/// magnitude on average.
InitPair random_init(const DenseMatrix& x, index_t r, std::uint64_t seed);

/// Starting pair per cfg.init and cfg.seed. Entries are raised to `floor`
/// (pass a positive floor for multiplicative-update solvers, which cannot
/// leave exact zeros; zero for projected-gradient solvers).
InitPair make_init(const DenseMatrix& x, index_t r, const SolverConfig& cfg, double floor);

/// Floor used by the multiplicative-update solvers below.
inline double mu_init_floor(const DenseMatrix& x) { return 1e-9 * x.mean(); }

/// Multiplicative-update NMF (Lee-Seung Frobenius rules):
///   H <- H .* (Z^T X) ./ (Z^T Z H),  Z <- Z .* (X H^T) ./ (Z H H^T),
/// denominators floored by cfg.mu_eps. Stops when the objective change per
/// sweep falls below cfg.tol relative to max(1, objective), or at
/// cfg.max_iter sweeps.
ShallowFactorization mu_nmf(const DenseMatrix& x, index_t r, const SolverConfig& cfg);
ShallowFactorization mu_nmf(const DenseMatrix& x, index_t r, const SolverConfig& cfg,
                            InitPair init);

/// Non-smooth NMF: X ~ Z S H with the theta-smoothing matrix. Multiplicative
/// updates with S absorbed into the opposite factor — effective basis Z S for
/// the H update, effective encoding S H for the Z update — which keeps the
/// monotonicity argument of plain MU intact. theta = 0 reproduces mu_nmf
/// exactly (same iterates for the same init and config).
ShallowFactorization nsnmf(const DenseMatrix& x, index_t r, double theta,
                           const SolverConfig& cfg);
ShallowFactorization nsnmf(const DenseMatrix& x, index_t r, double theta, const SolverConfig& cfg,
                           InitPair init);

}  // namespace dnsnmf
