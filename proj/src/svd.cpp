#include "dnsnmf/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dnsnmf/kernels.hpp"

namespace dnsnmf {

namespace {

double row_dot(const double* a, const double* b, index_t len) {
  double acc = 0.0;
  for (index_t i = 0; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

void rotate_rows(double* a, double* b, index_t len, double c, double s) {
  for (index_t i = 0; i < len; ++i) {
    const double x = a[i];
    const double y = b[i];
    a[i] = c * x - s * y;
    b[i] = s * x + c * y;
  }
}

// Orthonormal completion for null-space columns of u: canonical basis vectors
// re-orthogonalized against the columns accepted so far.
void complete_column(DenseMatrix& u, index_t col, index_t filled_cols, index_t& next_basis) {
  const index_t p = u.rows();
  while (next_basis < p) {
    std::vector<double> cand(static_cast<std::size_t>(p), 0.0);
    cand[static_cast<std::size_t>(next_basis)] = 1.0;
    ++next_basis;
    for (int pass = 0; pass < 2; ++pass) {
      for (index_t c = 0; c < filled_cols; ++c) {
        if (c == col) continue;
        double proj = 0.0;
        for (index_t i = 0; i < p; ++i) proj += cand[static_cast<std::size_t>(i)] * u(i, c);
        for (index_t i = 0; i < p; ++i) cand[static_cast<std::size_t>(i)] -= proj * u(i, c);
      }
    }
    double nn = 0.0;
    for (double v : cand) nn += v * v;
    nn = std::sqrt(nn);
    if (nn > 0.5) {
      for (index_t i = 0; i < p; ++i) u(i, col) = cand[static_cast<std::size_t>(i)] / nn;
      return;
    }
  }
  throw NumericalError("thin_svd: orthonormal completion failed");
}

}  // namespace

ThinSvd thin_svd(const DenseMatrix& a, index_t k) {
  const index_t p = a.rows();
  const index_t n = a.cols();
  if (k < 1 || k > std::min(p, n)) {
    throw DimensionError("thin_svd: k = " + std::to_string(k) + " out of range for " +
                         std::to_string(p) + "x" + std::to_string(n));
  }
  if (p < n) {
    ThinSvd t = thin_svd(kernels::transpose(a), k);
    std::swap(t.u, t.v);
    return t;
  }

  // Work on columns stored contiguously: w row j holds column j of a.
  DenseMatrix w = kernels::transpose(a);  // n x p
  DenseMatrix vt = DenseMatrix::identity(n);

  constexpr double kRotTol = 1e-14;
  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (index_t j = 0; j + 1 < n; ++j) {
      double* wj = w.data() + j * p;
      for (index_t l = j + 1; l < n; ++l) {
        double* wl = w.data() + l * p;
        const double alpha = row_dot(wj, wj, p);
        const double beta = row_dot(wl, wl, p);
        const double gamma = row_dot(wj, wl, p);
        if (gamma == 0.0 || gamma * gamma <= kRotTol * kRotTol * alpha * beta) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_rows(wj, wl, p, c, s);
        rotate_rows(vt.data() + j * n, vt.data() + l * n, n, c, s);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
  for (index_t j = 0; j < n; ++j) {
    sigma[static_cast<std::size_t>(j)] = std::sqrt(row_dot(w.data() + j * p, w.data() + j * p, p));
  }
  std::vector<index_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), index_t{0});
  std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
    return sigma[static_cast<std::size_t>(x)] > sigma[static_cast<std::size_t>(y)];
  });

  const double sigma_max = sigma[static_cast<std::size_t>(order[0])];
  const double rank_tol =
      sigma_max * static_cast<double>(p) * std::numeric_limits<double>::epsilon();

  ThinSvd out;
  out.u = DenseMatrix(p, k);
  out.v = DenseMatrix(n, k);
  out.singular_values.resize(static_cast<std::size_t>(k));
  std::vector<index_t> deferred;
  for (index_t j = 0; j < k; ++j) {
    const index_t src = order[static_cast<std::size_t>(j)];
    const double sv = sigma[static_cast<std::size_t>(src)];
    out.singular_values[static_cast<std::size_t>(j)] = sv;
    for (index_t i = 0; i < n; ++i) out.v(i, j) = vt(src, i);
    if (sv > rank_tol && sv > 0.0) {
      const double* col = w.data() + src * p;
      for (index_t i = 0; i < p; ++i) out.u(i, j) = col[i] / sv;
    } else {
      out.singular_values[static_cast<std::size_t>(j)] = 0.0;
      deferred.push_back(j);
    }
  }
  index_t next_basis = 0;
  for (index_t j : deferred) complete_column(out.u, j, k, next_basis);
  return out;
}

}  // namespace dnsnmf
