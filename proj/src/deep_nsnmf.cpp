#include "dnsnmf/deep_nsnmf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "dnsnmf/apg.hpp"
#include "dnsnmf/kernels.hpp"
#include "dnsnmf/shallow_nmf.hpp"

namespace dnsnmf {

void validate_stack(const LayerStack& stack, index_t p, index_t n, const char* where) {
  const index_t m = stack.layers();
  if (m < 1) throw DimensionError(std::string(where) + ": stack has no layers");
  if (static_cast<index_t>(stack.smoothing.size()) != m) {
    throw DimensionError(std::string(where) + ": smoothing list does not match layer count");
  }
  index_t prev = p;
  for (index_t i = 0; i < m; ++i) {
    const DenseMatrix& zi = stack.z[static_cast<std::size_t>(i)];
    if (zi.rows() != prev) {
      throw DimensionError(std::string(where) + ": z[" + std::to_string(i) +
                           "] rows do not chain (expected " + std::to_string(prev) + ", got " +
                           std::to_string(zi.rows()) + ")");
    }
    if (stack.smoothing[static_cast<std::size_t>(i)].r != zi.cols()) {
      throw DimensionError(std::string(where) + ": smoothing[" + std::to_string(i) +
                           "].r does not match z[" + std::to_string(i) + "] columns");
    }
    if (!zi.all_nonnegative()) {
      throw DomainError(std::string(where) + ": z[" + std::to_string(i) + "] has negative entries");
    }
    prev = zi.cols();
  }
  if (stack.h_top.rows() != prev || stack.h_top.cols() != n) {
    throw DimensionError(std::string(where) + ": h_top must be " + std::to_string(prev) + "x" +
                         std::to_string(n));
  }
  if (!stack.h_top.all_nonnegative()) {
    throw DomainError(std::string(where) + ": h_top has negative entries");
  }
}

LayerStack pretrain(const DenseMatrix& x, const std::vector<index_t>& dims,
                    const std::vector<double>& thetas, const SolverConfig& cfg) {
  if (dims.empty()) throw ParameterError("pretrain: dims must name at least one layer");
  if (dims.size() != thetas.size()) {
    throw ParameterError("pretrain: dims and thetas must have equal length");
  }
  index_t prev = x.rows();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1 || dims[i] > std::min(prev, x.cols())) {
      throw DimensionError("pretrain: dims[" + std::to_string(i) + "] = " +
                           std::to_string(dims[i]) + " breaks the dimension chain");
    }
    prev = dims[i];
  }

  LayerStack stack;
  DenseMatrix target = x;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    ShallowFactorization f = nsnmf(target, dims[i], thetas[i], cfg);
    stack.z.push_back(std::move(f.z));
    stack.smoothing.push_back(*f.smoothing);
    target = std::move(f.h);
  }
  stack.h_top = std::move(target);
  return stack;
}

DenseMatrix layer_features(const LayerStack& stack, index_t i) {
  const index_t m = stack.layers();
  if (i < 1 || i > m) {
    throw ParameterError("layer_features: i = " + std::to_string(i) + " out of range [1, " +
                         std::to_string(m) + "]");
  }
  DenseMatrix w = stack.z[0];
  for (index_t l = 1; l < i; ++l) {
    const DenseMatrix s = smoothing_matrix(stack.smoothing[static_cast<std::size_t>(l - 1)]);
    w = kernels::matmul(kernels::matmul(w, s), stack.z[static_cast<std::size_t>(l)]);
  }
  return w;
}

DenseMatrix reconstruct(const LayerStack& stack) {
  const index_t m = stack.layers();
  const DenseMatrix w = layer_features(stack, m);
  const DenseMatrix s = smoothing_matrix(stack.smoothing[static_cast<std::size_t>(m - 1)]);
  return kernels::matmul(kernels::matmul(w, s), stack.h_top);
}

double deep_objective(const DenseMatrix& x, const LayerStack& stack) {
  return 0.5 * kernels::sq_frobenius_diff(x, reconstruct(stack));
}

namespace {

ApgResult solve_block(const GradientFn& g, const ObjectiveFn& f, double lipschitz,
                      DenseMatrix init, const ApgOptions& opt, int sweep,
                      const std::string& block) {
  try {
    return apg_solve(g, f, lipschitz, std::move(init), opt);
  } catch (const NumericalError& e) {
    throw NumericalError("finetune: sweep " + std::to_string(sweep) + ", block " + block + ": " +
                         e.what(),
                         e.iteration());
  }
}

}  // namespace

FinetuneResult finetune(const DenseMatrix& x, LayerStack stack, const SolverConfig& cfg) {
  validate_stack(stack, x.rows(), x.cols(), "finetune");
  if (!x.all_finite() || !x.all_nonnegative()) {
    throw DomainError("finetune: x must be finite and nonnegative");
  }
  if (cfg.max_sweeps < 1) throw ParameterError("finetune: max_sweeps must be >= 1");

  const index_t m = stack.layers();
  std::vector<DenseMatrix> s_mats;
  s_mats.reserve(static_cast<std::size_t>(m));
  for (const SmoothingSpec& spec : stack.smoothing) s_mats.push_back(smoothing_matrix(spec));

  const DenseMatrix xt = kernels::transpose(x);
  const ApgOptions opt = ApgOptions::from(cfg);

  FinetuneResult out;
  out.initial_objective = deep_objective(x, stack);
  double obj = out.initial_objective;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepReport report;
    report.sweep_index = sweep;

    // Suffix products of the not-yet-updated factors:
    // u[i] = S_{i+1} Z_{i+2} S_{i+2} ... Z_m S_m H_m (0-based i).
    std::vector<DenseMatrix> u(static_cast<std::size_t>(m));
    DenseMatrix v = stack.h_top;  // V_{i+1} = Z_{i+1} S_{i+1} ... H_m
    for (index_t i = m - 1; i >= 0; --i) {
      u[static_cast<std::size_t>(i)] = kernels::matmul(s_mats[static_cast<std::size_t>(i)], v);
      if (i > 0) {
        v = kernels::matmul(stack.z[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(i)]);
      }
    }

    // Z_1: min ||X^T - B^T Z_1^T|| with B = u[0].
    {
      NnlsProblem prob = NnlsProblem::make(kernels::transpose(u[0]), xt);
      const GradientFn g = [&prob](const DenseMatrix& w) { return nnls_gradient(prob, w); };
      const ObjectiveFn f = [&prob](const DenseMatrix& w) { return nnls_objective(prob, w); };
      ApgResult res = solve_block(g, f, nnls_lipschitz(prob, cfg.lipschitz_safety),
                                  kernels::transpose(stack.z[0]), opt, sweep, "Z1");
      stack.z[0] = kernels::transpose(res.solution);
      report.per_block_inner_iters.push_back(res.iterations);
    }

    // Z_i for i = 2..m: prefix of updated factors on the left, u[i-1] on the right.
    DenseMatrix prefix = kernels::matmul(stack.z[0], s_mats[0]);
    for (index_t i = 1; i < m; ++i) {
      SandwichProblem prob = SandwichProblem::make(prefix, u[static_cast<std::size_t>(i)], x);
      const GradientFn g = [&prob](const DenseMatrix& w) { return sandwich_gradient(prob, w); };
      const ObjectiveFn f = [&prob](const DenseMatrix& w) { return sandwich_objective(prob, w); };
      ApgResult res = solve_block(g, f, sandwich_lipschitz(prob, cfg.lipschitz_safety),
                                  stack.z[static_cast<std::size_t>(i)], opt, sweep,
                                  "Z" + std::to_string(i + 1));
      stack.z[static_cast<std::size_t>(i)] = res.solution;
      report.per_block_inner_iters.push_back(res.iterations);
      prefix = kernels::matmul(kernels::matmul(prefix, res.solution),
                               s_mats[static_cast<std::size_t>(i)]);
    }

    // H_m against the fully updated chain.
    {
      NnlsProblem prob = NnlsProblem::make(prefix, x);
      const GradientFn g = [&prob](const DenseMatrix& w) { return nnls_gradient(prob, w); };
      const ObjectiveFn f = [&prob](const DenseMatrix& w) { return nnls_objective(prob, w); };
      ApgResult res = solve_block(g, f, nnls_lipschitz(prob, cfg.lipschitz_safety), stack.h_top,
                                  opt, sweep, "H");
      stack.h_top = res.solution;
      report.per_block_inner_iters.push_back(res.iterations);
    }

    report.objective = deep_objective(x, stack);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.sweeps.push_back(report);

    if (!std::isfinite(report.objective)) {
      throw NumericalError("finetune: objective became non-finite", sweep);
    }
    const bool done = std::abs(obj - report.objective) <= cfg.outer_tol * std::max(1.0, obj);
    obj = report.objective;
    if (done) break;
  }

  out.stack = std::move(stack);
  return out;
}

}  // namespace dnsnmf
