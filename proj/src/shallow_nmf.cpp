#include "dnsnmf/shallow_nmf.hpp"

#include <algorithm>
#include <cmath>

#include "dnsnmf/kernels.hpp"
#include "dnsnmf/rng.hpp"

namespace dnsnmf {

namespace {

void check_input(const DenseMatrix& x, index_t r, const char* where) {
  if (!x.all_finite()) throw DomainError(std::string(where) + ": x must be finite");
  if (!x.all_nonnegative()) {
    throw DomainError(std::string(where) + ": x must be element-wise nonnegative");
  }
  if (r < 1 || r > std::min(x.rows(), x.cols())) {
    throw DimensionError(std::string(where) + ": r = " + std::to_string(r) +
                         " out of range for " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
  }
}

void check_init(const DenseMatrix& x, index_t r, const InitPair& init, const char* where) {
  if (init.z0.rows() != x.rows() || init.z0.cols() != r || init.h0.rows() != r ||
      init.h0.cols() != x.cols()) {
    throw DimensionError(std::string(where) + ": init shapes do not match x and r");
  }
  if (!init.z0.all_nonnegative() || !init.h0.all_nonnegative()) {
    throw DomainError(std::string(where) + ": init must be element-wise nonnegative");
  }
}

}  // namespace

InitPair random_init(const DenseMatrix& x, index_t r, std::uint64_t seed) {
  const double mean = x.mean();
  // E[(z0 h0)_ij] = r * (s/2)^2 for entries uniform on [0, s); match mean(x).
  const double s = mean > 0.0 ? 2.0 * std::sqrt(mean / static_cast<double>(r)) : 1.0;
  Rng rng(derive_seed(seed, 0x696e6974u));
  InitPair out;
  out.z0 = DenseMatrix(x.rows(), r);
  out.h0 = DenseMatrix(r, x.cols());
  for (double& v : out.z0.values()) v = rng.uniform(0.0, s);
  for (double& v : out.h0.values()) v = rng.uniform(0.0, s);
  return out;
}

InitPair make_init(const DenseMatrix& x, index_t r, const SolverConfig& cfg, double floor) {
  if (cfg.init == InitKind::nndsvd) return nndsvd(x, r, floor, cfg.seed);
  InitPair out = random_init(x, r, cfg.seed);
  if (floor > 0.0) {
    for (double& v : out.z0.values()) v = std::max(v, floor);
    for (double& v : out.h0.values()) v = std::max(v, floor);
  }
  return out;
}

ShallowFactorization mu_nmf(const DenseMatrix& x, index_t r, const SolverConfig& cfg) {
  check_input(x, r, "mu_nmf");
  return mu_nmf(x, r, cfg, make_init(x, r, cfg, mu_init_floor(x)));
}

ShallowFactorization mu_nmf(const DenseMatrix& x, index_t r, const SolverConfig& cfg,
                            InitPair init) {
  check_input(x, r, "mu_nmf");
  check_init(x, r, init, "mu_nmf");
  if (cfg.max_iter < 1) throw ParameterError("mu_nmf: max_iter must be >= 1");

  DenseMatrix z = std::move(init.z0);
  DenseMatrix h = std::move(init.h0);
  double obj = 0.5 * kernels::sq_frobenius_diff(x, kernels::matmul(z, h));
  std::vector<double> trace{obj};

  for (int it = 0; it < cfg.max_iter; ++it) {
    h = kernels::hadamard_mul_div(h, kernels::matmul_tn(z, x),
                                  kernels::matmul(kernels::matmul_tn(z, z), h), cfg.mu_eps);
    z = kernels::hadamard_mul_div(z, kernels::matmul_nt(x, h),
                                  kernels::matmul(z, kernels::matmul_nt(h, h)), cfg.mu_eps);
    const double next = 0.5 * kernels::sq_frobenius_diff(x, kernels::matmul(z, h));
    trace.push_back(next);
    if (!std::isfinite(next)) throw NumericalError("mu_nmf: objective became non-finite", it + 1);
    const bool done = std::abs(obj - next) <= cfg.tol * std::max(1.0, obj);
    obj = next;
    if (done) break;
  }
  return ShallowFactorization{std::move(z), std::move(h), std::nullopt, std::move(trace)};
}

ShallowFactorization nsnmf(const DenseMatrix& x, index_t r, double theta,
                           const SolverConfig& cfg) {
  check_input(x, r, "nsnmf");
  return nsnmf(x, r, theta, cfg, make_init(x, r, cfg, mu_init_floor(x)));
}

ShallowFactorization nsnmf(const DenseMatrix& x, index_t r, double theta, const SolverConfig& cfg,
                           InitPair init) {
  check_input(x, r, "nsnmf");
  check_init(x, r, init, "nsnmf");
  if (cfg.max_iter < 1) throw ParameterError("nsnmf: max_iter must be >= 1");
  const SmoothingSpec spec{theta, r};
  const DenseMatrix s = smoothing_matrix(spec);

  DenseMatrix z = std::move(init.z0);
  DenseMatrix h = std::move(init.h0);
  double obj = 0.5 * kernels::sq_frobenius_diff(x, kernels::matmul(kernels::matmul(z, s), h));
  std::vector<double> trace{obj};

  for (int it = 0; it < cfg.max_iter; ++it) {
    const DenseMatrix zs = kernels::matmul(z, s);
    h = kernels::hadamard_mul_div(h, kernels::matmul_tn(zs, x),
                                  kernels::matmul(kernels::matmul_tn(zs, zs), h), cfg.mu_eps);
    const DenseMatrix sh = kernels::matmul(s, h);
    z = kernels::hadamard_mul_div(z, kernels::matmul_nt(x, sh),
                                  kernels::matmul(z, kernels::matmul_nt(sh, sh)), cfg.mu_eps);
    const double next =
        0.5 * kernels::sq_frobenius_diff(x, kernels::matmul(kernels::matmul(z, s), h));
    trace.push_back(next);
    if (!std::isfinite(next)) throw NumericalError("nsnmf: objective became non-finite", it + 1);
    const bool done = std::abs(obj - next) <= cfg.tol * std::max(1.0, obj);
    obj = next;
    if (done) break;
  }
  return ShallowFactorization{std::move(z), std::move(h), spec, std::move(trace)};
}

}  // namespace dnsnmf
