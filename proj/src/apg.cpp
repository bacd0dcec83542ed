#include "dnsnmf/apg.hpp"

#include <cmath>

#include "dnsnmf/kernels.hpp"
#include "dnsnmf/spectral.hpp"

namespace dnsnmf {

namespace k = kernels;

NnlsProblem NnlsProblem::make(DenseMatrix left, DenseMatrix target) {
  if (left.rows() != target.rows()) {
    throw DimensionError("NnlsProblem: left has " + std::to_string(left.rows()) +
                         " rows but target has " + std::to_string(target.rows()));
  }
  NnlsProblem p;
  p.gram = k::matmul_tn(left, left);
  p.cross = k::matmul_tn(left, target);
  p.target_sq_norm = k::dot(target, target);
  p.left = std::move(left);
  p.target = std::move(target);
  return p;
}

SandwichProblem SandwichProblem::make(DenseMatrix left, DenseMatrix right, DenseMatrix target) {
  if (left.rows() != target.rows() || right.cols() != target.cols()) {
    throw DimensionError("SandwichProblem: left " + std::to_string(left.rows()) + "x" +
                         std::to_string(left.cols()) + ", right " + std::to_string(right.rows()) +
                         "x" + std::to_string(right.cols()) + " incompatible with target " +
                         std::to_string(target.rows()) + "x" + std::to_string(target.cols()));
  }
  SandwichProblem p;
  p.gram_left = k::matmul_tn(left, left);
  p.gram_right = k::matmul_nt(right, right);
  p.cross = k::matmul_nt(k::matmul_tn(left, target), right);
  p.target_sq_norm = k::dot(target, target);
  p.left = std::move(left);
  p.right = std::move(right);
  p.target = std::move(target);
  return p;
}

namespace {
void require_variable_shape(const std::pair<index_t, index_t>& want, const DenseMatrix& got,
                            const char* where) {
  if (got.rows() != want.first || got.cols() != want.second) {
    throw DimensionError(std::string(where) + ": variable must be " + std::to_string(want.first) +
                         "x" + std::to_string(want.second) + ", got " + std::to_string(got.rows()) +
                         "x" + std::to_string(got.cols()));
  }
}
}  // namespace

DenseMatrix nnls_gradient(const NnlsProblem& p, const DenseMatrix& h) {
  require_variable_shape(p.variable_shape(), h, "nnls_gradient");
  return k::subtract(k::matmul(p.gram, h), p.cross);
}

DenseMatrix sandwich_gradient(const SandwichProblem& p, const DenseMatrix& z) {
  require_variable_shape(p.variable_shape(), z, "sandwich_gradient");
  return k::subtract(k::matmul(p.gram_left, k::matmul(z, p.gram_right)), p.cross);
}

double nnls_objective(const NnlsProblem& p, const DenseMatrix& h) {
  require_variable_shape(p.variable_shape(), h, "nnls_objective");
  // 1/2 (<h, Gh> - 2 <C, h> + ||X||^2)
  const double quad = k::dot(h, k::matmul(p.gram, h));
  const double lin = k::dot(p.cross, h);
  return 0.5 * (quad - 2.0 * lin + p.target_sq_norm);
}

double sandwich_objective(const SandwichProblem& p, const DenseMatrix& z) {
  require_variable_shape(p.variable_shape(), z, "sandwich_objective");
  const double quad = k::dot(z, k::matmul(p.gram_left, k::matmul(z, p.gram_right)));
  const double lin = k::dot(p.cross, z);
  return 0.5 * (quad - 2.0 * lin + p.target_sq_norm);
}

double nnls_lipschitz(const NnlsProblem& p, double safety) {
  return spectral_norm(p.gram).value * safety;
}

double sandwich_lipschitz(const SandwichProblem& p, double safety) {
  return spectral_norm(p.gram_left).value * spectral_norm(p.gram_right).value * safety;
}

ApgState::ApgState(DenseMatrix init, double lipschitz_constant)
    : h_current(init), h_previous(init), y(std::move(init)), alpha(1.0), k(0),
      lipschitz(lipschitz_constant) {
  if (lipschitz <= 0.0) throw ParameterError("ApgState: lipschitz must be > 0");
  if (!h_current.all_nonnegative()) {
    throw DomainError("ApgState: init must be element-wise nonnegative");
  }
}

void apg_step(ApgState& state, const GradientFn& gradient) {
  DenseMatrix grad = gradient(state.y);
  if (!grad.all_finite()) {
    throw NumericalError("apg_step: non-finite gradient at iteration " + std::to_string(state.k),
                         state.k);
  }
  DenseMatrix h_next = k::gradient_step_project(state.y, grad, 1.0 / state.lipschitz);
  const double alpha_next = apg_momentum_next(state.alpha);
  const double beta = (state.alpha - 1.0) / alpha_next;
  state.y = k::extrapolate(h_next, state.h_current, beta);
  state.h_previous = std::move(state.h_current);
  state.h_current = std::move(h_next);
  state.alpha = alpha_next;
  ++state.k;
}

ApgResult apg_solve(const GradientFn& gradient, const ObjectiveFn& objective, double lipschitz,
                    DenseMatrix init, const ApgOptions& opt) {
  if (opt.max_iter < 1) throw ParameterError("apg_solve: max_iter must be >= 1");
  ApgState state(std::move(init), lipschitz);

  ApgResult result;
  result.initial_objective = objective(state.h_current);
  result.objective = result.initial_objective;
  result.solution = state.h_current;

  for (int it = 0; it < opt.max_iter; ++it) {
    apg_step(state, gradient);
    result.iterations = state.k;
    const double f = objective(state.h_current);
    if (f < result.objective) {
      result.objective = f;
      result.solution = state.h_current;
    }
    const double prev_norm = k::frobenius_norm(state.h_previous);
    const double change = k::frobenius_norm_diff(state.h_current, state.h_previous);
    if (change <= opt.tol * std::max(1.0, prev_norm)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace dnsnmf
