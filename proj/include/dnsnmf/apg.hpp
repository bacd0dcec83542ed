#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/solver_config.hpp"

namespace dnsnmf {

// Accelerated proximal gradient (Nesterov) machinery. One solver serves the
// three block shapes of the fine-tuning stage:
//   min_{H >= 0}  1/2 ||X - A H||_F^2          (top encoding, and Z_1 via transposition)
//   min_{Z >= 0}  1/2 ||X - A Z B||_F^2        (sandwiched inner factor)

using GradientFn = std::function<DenseMatrix(const DenseMatrix&)>;
using ObjectiveFn = std::function<double(const DenseMatrix&)>;

/// Nonnegative least squares block: min_{H >= 0} 1/2 ||target - left * H||_F^2.
/// A^T A and A^T X are cached at construction so each gradient costs
/// gram-sized products instead of data-sized ones.
struct NnlsProblem {
  DenseMatrix target;  ///< X
  DenseMatrix left;    ///< A

  DenseMatrix gram;    ///< A^T A
  DenseMatrix cross;   ///< A^T X
  double target_sq_norm = 0.0;

  static NnlsProblem make(DenseMatrix left, DenseMatrix target);

  std::pair<index_t, index_t> variable_shape() const { return {left.cols(), target.cols()}; }
};

/// Sandwiched block: min_{Z >= 0} 1/2 ||target - left * Z * right||_F^2.
struct SandwichProblem {
  DenseMatrix target;  ///< X
  DenseMatrix left;    ///< A_i
  DenseMatrix right;   ///< B_i

  DenseMatrix gram_left;   ///< A_i^T A_i
  DenseMatrix gram_right;  ///< B_i B_i^T
  DenseMatrix cross;       ///< A_i^T X B_i^T
  double target_sq_norm = 0.0;

  static SandwichProblem make(DenseMatrix left, DenseMatrix right, DenseMatrix target);

  std::pair<index_t, index_t> variable_shape() const { return {left.cols(), right.rows()}; }
};

/// A^T A h - A^T X.
DenseMatrix nnls_gradient(const NnlsProblem& p, const DenseMatrix& h);

/// A^T A z B B^T - A^T X B^T.
DenseMatrix sandwich_gradient(const SandwichProblem& p, const DenseMatrix& z);

double nnls_objective(const NnlsProblem& p, const DenseMatrix& h);
double sandwich_objective(const SandwichProblem& p, const DenseMatrix& z);

/// ||A^T A||_2 times the safety factor.
double nnls_lipschitz(const NnlsProblem& p, double safety = 1.01);

/// ||A^T A||_2 * ||B B^T||_2 times the safety factor.
double sandwich_lipschitz(const SandwichProblem& p, double safety = 1.01);

/// Momentum recurrence: alpha_{k+1} = (1 + sqrt(4 alpha_k^2 + 1)) / 2.
/// Satisfies alpha^2 - alpha = alpha_k^2 exactly in real arithmetic.
inline double apg_momentum_next(double alpha) {
  return 0.5 * (1.0 + std::sqrt(4.0 * alpha * alpha + 1.0));
}

/// Solver state after k iterations. h_current and h_previous stay nonnegative;
/// the extrapolation point y may not.
struct ApgState {
  DenseMatrix h_current;
  DenseMatrix h_previous;
  DenseMatrix y;
  double alpha = 1.0;
  int k = 0;
  double lipschitz = 0.0;

  ApgState() = default;
  ApgState(DenseMatrix init, double lipschitz_constant);
};

/// One iteration: projected gradient step from y, momentum update, new y.
/// Throws NumericalError (with the iteration index) on a non-finite gradient.
void apg_step(ApgState& state, const GradientFn& gradient);

struct ApgOptions {
  double tol = 1e-6;  ///< relative iterate-change stopping rule
  int max_iter = 50;

  static ApgOptions from(const SolverConfig& cfg) {
    return ApgOptions{cfg.inner_tol, cfg.max_inner_iter};
  }
};

struct ApgResult {
  DenseMatrix solution;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double initial_objective = 0.0;
};

/// Runs the accelerated iteration from `init` (which must be nonnegative) and
/// returns the best objective value visited. Plain accelerated iterates are
/// not monotone in the objective; returning the best visited point makes
/// every block solve a descent step, which the outer block-coordinate loop
/// relies on. Stops when the relative iterate change drops below opt.tol or
/// the iteration cap is reached.
ApgResult apg_solve(const GradientFn& gradient, const ObjectiveFn& objective, double lipschitz,
                    DenseMatrix init, const ApgOptions& opt);

}  // namespace dnsnmf
