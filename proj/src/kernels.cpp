#include "dnsnmf/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace dnsnmf::kernels {

namespace {

// Below this many scalar operations the OpenMP if-clause keeps the loop on
// the calling thread; team startup costs more than the work.
constexpr index_t kMinParallelWork = 1 << 15;

DenseMatrix matmul_impl(const DenseMatrix& a, const DenseMatrix& b, bool parallel) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + ")");
  }
  const index_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  const double* bp = b.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n * k >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    double* crow = cp + i * n;
    const double* arow = ap + i * k;
    for (index_t l = 0; l < k; ++l) {
      const double av = arow[l];
      const double* brow = bp + l * n;
      for (index_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn_impl(const DenseMatrix& a, const DenseMatrix& b, bool parallel) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: row counts differ (" + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()) + ")");
  }
  const index_t k = a.rows(), m = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  const double* bp = b.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n * k >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    double* crow = cp + i * n;
    for (index_t l = 0; l < k; ++l) {
      const double av = ap[l * m + i];
      const double* brow = bp + l * n;
      for (index_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt_impl(const DenseMatrix& a, const DenseMatrix& b, bool parallel) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: column counts differ (" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.cols()) + ")");
  }
  const index_t m = a.rows(), k = a.cols(), n = b.rows();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  const double* bp = b.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n * k >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const double* arow = ap + i * k;
    double* crow = cp + i * n;
    for (index_t j = 0; j < n; ++j) {
      const double* brow = bp + j * k;
      double acc = 0.0;
      for (index_t l = 0; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] = acc;
    }
  }
  return c;
}

DenseMatrix transpose_impl(const DenseMatrix& a, bool parallel) {
  const index_t m = a.rows(), n = a.cols();
  DenseMatrix t(n, m);
  const double* ap = a.data();
  double* tp = t.data();
  const bool par = parallel && n > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t j = 0; j < n; ++j) {
    for (index_t i = 0; i < m; ++i) tp[j * m + i] = ap[i * n + j];
  }
  return t;
}

DenseMatrix hadamard_mul_div_impl(const DenseMatrix& a, const DenseMatrix& num,
                                  const DenseMatrix& den, double eps, bool parallel) {
  detail::require_same_shape(a, num, "hadamard_mul_div");
  detail::require_same_shape(a, den, "hadamard_mul_div");
  const index_t m = a.rows(), n = a.cols();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  const double* np = num.data();
  const double* dp = den.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    for (index_t j = 0; j < n; ++j) {
      cp[off + j] = ap[off + j] * np[off + j] / (dp[off + j] + eps);
    }
  }
  return c;
}

DenseMatrix project_nonneg_impl(const DenseMatrix& a, bool parallel) {
  const index_t m = a.rows(), n = a.cols();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    for (index_t j = 0; j < n; ++j) cp[off + j] = std::max(0.0, ap[off + j]);
  }
  return c;
}

// Reductions accumulate one partial per row and combine them in row order so
// the result does not depend on the thread partition.
double row_reduce(index_t m, index_t n, bool parallel, const double* ap, const double* bp,
                  int mode) {
  std::vector<double> partial(static_cast<std::size_t>(m), 0.0);
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    double acc = 0.0;
    switch (mode) {
      case 0:  // sum of squares of a
        for (index_t j = 0; j < n; ++j) acc += ap[off + j] * ap[off + j];
        break;
      case 1:  // sum of squares of (a - b)
        for (index_t j = 0; j < n; ++j) {
          const double d = ap[off + j] - bp[off + j];
          acc += d * d;
        }
        break;
      default:  // <a, b>
        for (index_t j = 0; j < n; ++j) acc += ap[off + j] * bp[off + j];
        break;
    }
    partial[static_cast<std::size_t>(i)] = acc;
  }
  double total = 0.0;
  for (index_t i = 0; i < m; ++i) total += partial[static_cast<std::size_t>(i)];
  return total;
}

double frobenius_norm_impl(const DenseMatrix& a, bool parallel) {
  return std::sqrt(row_reduce(a.rows(), a.cols(), parallel, a.data(), nullptr, 0));
}

double sq_frobenius_diff_impl(const DenseMatrix& a, const DenseMatrix& b, bool parallel) {
  detail::require_same_shape(a, b, "sq_frobenius_diff");
  return row_reduce(a.rows(), a.cols(), parallel, a.data(), b.data(), 1);
}

double dot_impl(const DenseMatrix& a, const DenseMatrix& b, bool parallel) {
  detail::require_same_shape(a, b, "dot");
  return row_reduce(a.rows(), a.cols(), parallel, a.data(), b.data(), 2);
}

DenseMatrix extrapolate_impl(const DenseMatrix& h, const DenseMatrix& h_prev, double beta,
                             bool parallel) {
  detail::require_same_shape(h, h_prev, "extrapolate");
  const index_t m = h.rows(), n = h.cols();
  DenseMatrix y(m, n);
  const double* hp = h.data();
  const double* pp = h_prev.data();
  double* yp = y.data();
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    for (index_t j = 0; j < n; ++j) {
      yp[off + j] = hp[off + j] + beta * (hp[off + j] - pp[off + j]);
    }
  }
  return y;
}

DenseMatrix gradient_step_project_impl(const DenseMatrix& y, const DenseMatrix& grad, double step,
                                       bool parallel) {
  detail::require_same_shape(y, grad, "gradient_step_project");
  const index_t m = y.rows(), n = y.cols();
  DenseMatrix h(m, n);
  const double* yp = y.data();
  const double* gp = grad.data();
  double* hp = h.data();
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    for (index_t j = 0; j < n; ++j) {
      hp[off + j] = std::max(0.0, yp[off + j] - step * gp[off + j]);
    }
  }
  return h;
}

DenseMatrix add_impl(const DenseMatrix& a, const DenseMatrix& b, double bscale, bool parallel) {
  detail::require_same_shape(a, b, "add/subtract");
  const index_t m = a.rows(), n = a.cols();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  const double* bp = b.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    for (index_t j = 0; j < n; ++j) cp[off + j] = ap[off + j] + bscale * bp[off + j];
  }
  return c;
}

DenseMatrix scale_impl(const DenseMatrix& a, double s, bool parallel) {
  const index_t m = a.rows(), n = a.cols();
  DenseMatrix c(m, n);
  const double* ap = a.data();
  double* cp = c.data();
  const bool par = parallel && m > 1 && m * n >= kMinParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (index_t i = 0; i < m; ++i) {
    const index_t off = i * n;
    for (index_t j = 0; j < n; ++j) cp[off + j] = s * ap[off + j];
  }
  return c;
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) { return matmul_impl(a, b, true); }
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul_tn_impl(a, b, true);
}
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul_nt_impl(a, b, true);
}
DenseMatrix transpose(const DenseMatrix& a) { return transpose_impl(a, true); }
DenseMatrix hadamard_mul_div(const DenseMatrix& a, const DenseMatrix& num, const DenseMatrix& den,
                             double eps) {
  return hadamard_mul_div_impl(a, num, den, eps, true);
}
DenseMatrix project_nonneg(const DenseMatrix& a) { return project_nonneg_impl(a, true); }
double frobenius_norm(const DenseMatrix& a) { return frobenius_norm_impl(a, true); }
double sq_frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return sq_frobenius_diff_impl(a, b, true);
}
double frobenius_norm_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return std::sqrt(sq_frobenius_diff_impl(a, b, true));
}
double dot(const DenseMatrix& a, const DenseMatrix& b) { return dot_impl(a, b, true); }
DenseMatrix extrapolate(const DenseMatrix& h, const DenseMatrix& h_prev, double beta) {
  return extrapolate_impl(h, h_prev, beta, true);
}
DenseMatrix gradient_step_project(const DenseMatrix& y, const DenseMatrix& grad, double step) {
  return gradient_step_project_impl(y, grad, step, true);
}
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) { return add_impl(a, b, 1.0, true); }
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  return add_impl(a, b, -1.0, true);
}
DenseMatrix scale(const DenseMatrix& a, double s) { return scale_impl(a, s, true); }

namespace serial {
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) { return matmul_impl(a, b, false); }
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul_tn_impl(a, b, false);
}
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul_nt_impl(a, b, false);
}
DenseMatrix transpose(const DenseMatrix& a) { return transpose_impl(a, false); }
DenseMatrix hadamard_mul_div(const DenseMatrix& a, const DenseMatrix& num, const DenseMatrix& den,
                             double eps) {
  return hadamard_mul_div_impl(a, num, den, eps, false);
}
DenseMatrix project_nonneg(const DenseMatrix& a) { return project_nonneg_impl(a, false); }
double frobenius_norm(const DenseMatrix& a) { return frobenius_norm_impl(a, false); }
double sq_frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return sq_frobenius_diff_impl(a, b, false);
}
double frobenius_norm_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return std::sqrt(sq_frobenius_diff_impl(a, b, false));
}
double dot(const DenseMatrix& a, const DenseMatrix& b) { return dot_impl(a, b, false); }
DenseMatrix extrapolate(const DenseMatrix& h, const DenseMatrix& h_prev, double beta) {
  return extrapolate_impl(h, h_prev, beta, false);
}
DenseMatrix gradient_step_project(const DenseMatrix& y, const DenseMatrix& grad, double step) {
  return gradient_step_project_impl(y, grad, step, false);
}
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) { return add_impl(a, b, 1.0, false); }
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  return add_impl(a, b, -1.0, false);
}
DenseMatrix scale(const DenseMatrix& a, double s) { return scale_impl(a, s, false); }
}  // namespace serial

}  // namespace dnsnmf::kernels
