#pragma once

#include <vector>

#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/smoothing.hpp"
#include "dnsnmf/solver_config.hpp"

namespace dnsnmf {

/// Deep factorization X ~ Z_1 S_1 Z_2 S_2 ... Z_m S_m H_m. z[i] is
/// r_i x r_{i+1} with r_0 = p; smoothing[i] holds (theta_{i+1}, r_{i+1});
/// h_top is r_m x n.
struct LayerStack {
  std::vector<DenseMatrix> z;
  std::vector<SmoothingSpec> smoothing;
  DenseMatrix h_top;

  index_t layers() const { return static_cast<index_t>(z.size()); }
};

/// One fine-tuning sweep: objective is 1/2 ||X - reconstruction||_F^2 after
/// the sweep; per_block_inner_iters lists the APG iteration counts for
/// Z_1..Z_m, H_m in update order. wall_time_seconds is informational only and
/// never serialized (checkpoints must be byte-stable across reruns).
struct SweepReport {
  int sweep_index = 0;
  double objective = 0.0;
  std::vector<int> per_block_inner_iters;
  double wall_time_seconds = 0.0;
};

struct FinetuneResult {
  LayerStack stack;
  std::vector<SweepReport> sweeps;
  double initial_objective = 0.0;
};

/// Throws DimensionError / DomainError unless the stack chains correctly
/// against a p x n data matrix and all factors are nonnegative.
void validate_stack(const LayerStack& stack, index_t p, index_t n, const char* where);

/// Pre-training: layer 1 factorizes X ~ Z_1 S_1 H_1, each deeper layer i
/// factorizes H_{i-1} ~ Z_i S_i H_i, every call being shallow nsnmf with the
/// same cfg (so a 1-layer pre-train is exactly nsnmf(x, dims[0], thetas[0])).
/// dims and thetas must have equal nonzero length.
LayerStack pretrain(const DenseMatrix& x, const std::vector<index_t>& dims,
                    const std::vector<double>& thetas, const SolverConfig& cfg);

/// Fine-tuning: block-coordinate sweeps in fixed order Z_1, Z_2, ..., Z_m,
/// H_m. Z_1 solves the transposed nonnegative least squares problem
/// min ||X^T - B^T Z_1^T|| with B = S_1 Z_2 S_2 ... H_m (old values); each
/// inner Z_i solves the sandwich problem with the already-updated prefix
/// Z_1 S_1 ... Z_{i-1} S_{i-1} on the left and the not-yet-updated suffix
/// S_i Z_{i+1} ... H_m on the right; H_m solves plain NNLS against the fully
/// updated chain. Every block runs APG warm-started at its current value.
/// Stops when the objective change per sweep falls below cfg.outer_tol
/// relative to max(1, objective), or at cfg.max_sweeps.
FinetuneResult finetune(const DenseMatrix& x, LayerStack stack, const SolverConfig& cfg);

/// W_i = Z_1 S_1 Z_2 ... S_{i-1} Z_i (1-based i; W_1 = Z_1): the basis whose
/// columns are the level-i features in data space.
DenseMatrix layer_features(const LayerStack& stack, index_t i);

/// Z_1 S_1 ... Z_m S_m H_m, computed as layer_features(m) * S_m * h_top.
DenseMatrix reconstruct(const LayerStack& stack);

/// 1/2 ||x - reconstruct(stack)||_F^2, the fine-tuning objective.
double deep_objective(const DenseMatrix& x, const LayerStack& stack);

}  // namespace dnsnmf
