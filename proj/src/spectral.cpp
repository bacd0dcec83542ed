#include "dnsnmf/spectral.hpp"

#include <cmath>

#include "dnsnmf/kernels.hpp"
#include "dnsnmf/rng.hpp"

namespace dnsnmf {

namespace {

DenseMatrix start_vector(index_t n, std::uint64_t stream) {
  // Seed mixes the shape so different problems do not share start vectors.
  Rng rng(derive_seed(0x5e31a7u, stream * 0x10001u + static_cast<std::uint64_t>(n)));
  DenseMatrix v(n, 1);
  for (index_t i = 0; i < n; ++i) v(i, 0) = rng.uniform(0.25, 1.0);
  return v;
}

double norm2(const DenseMatrix& v) { return kernels::frobenius_norm(v); }

}  // namespace

SpectralNormEstimate spectral_norm(const DenseMatrix& a, double tol, int max_iter) {
  if (tol <= 0.0) throw ParameterError("spectral_norm: tol must be > 0");
  if (max_iter < 1) throw ParameterError("spectral_norm: max_iter must be >= 1");

  SpectralNormEstimate est;
  DenseMatrix v = start_vector(a.cols(), 0);
  {
    const double nv = norm2(v);
    v = kernels::scale(v, 1.0 / nv);
  }

  double prev = -1.0;
  std::uint64_t restarts = 0;
  for (int it = 0; it < max_iter; ++it) {
    est.iterations_used = it + 1;
    DenseMatrix w = kernels::matmul(a, v);  // w = A v, sigma_est = ||w|| (v unit)
    const double sigma = norm2(w);
    if (sigma == 0.0) {
      // v lies in the null space; re-draw a few times before concluding A = 0.
      if (restarts < 3) {
        v = start_vector(a.cols(), ++restarts);
        v = kernels::scale(v, 1.0 / norm2(v));
        prev = -1.0;
        continue;
      }
      est.value = 0.0;
      est.converged = true;
      return est;
    }
    est.value = sigma;
    if (prev >= 0.0 && std::abs(sigma - prev) <= tol * sigma) {
      est.converged = true;
      return est;
    }
    prev = sigma;
    DenseMatrix next = kernels::matmul_tn(a, w);  // A^T A v
    const double nn = norm2(next);
    if (nn == 0.0) {
      est.converged = true;  // A^T w = 0 with w != 0 cannot happen for w = A v; keep safe
      return est;
    }
    v = kernels::scale(next, 1.0 / nn);
  }
  return est;
}

}  // namespace dnsnmf
