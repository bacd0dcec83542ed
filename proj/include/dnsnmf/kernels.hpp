#pragma once

#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf::kernels {

// Numerical kernels shared by every solver. The default entry points run the
// inner loops under OpenMP; kernels::serial holds the reference path used by
// the parity tests and the benchmark.
//
// Parallelization is over output rows and every output element is computed by
// exactly one thread with a fixed accumulation order. Reductions combine
// per-row partials in row order. Results are therefore bitwise identical to
// the serial reference for any thread count, which is what makes fixed-seed
// runs reproducible end to end.

/// a (m x k) * b (k x n).
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// a^T * b, a (k x m), b (k x n) -> (m x n).
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

/// a * b^T, a (m x k), b (n x k) -> (m x n).
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

/// Element-wise a * num / (den + eps). All shapes must match.
DenseMatrix hadamard_mul_div(const DenseMatrix& a, const DenseMatrix& num,
                             const DenseMatrix& den, double eps);

/// Element-wise max(0, a).
DenseMatrix project_nonneg(const DenseMatrix& a);

/// ||a||_F.
double frobenius_norm(const DenseMatrix& a);

/// Sum of squared entries of (a - b); the 1/2-scaled version is the NMF objective.
double sq_frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);

/// ||a - b||_F.
double frobenius_norm_diff(const DenseMatrix& a, const DenseMatrix& b);

/// <a, b> = sum of element-wise products.
double dot(const DenseMatrix& a, const DenseMatrix& b);

/// h + beta * (h - h_prev); the Nesterov extrapolation point.
DenseMatrix extrapolate(const DenseMatrix& h, const DenseMatrix& h_prev, double beta);

/// max(0, y - step * grad); the fused projected gradient step.
DenseMatrix gradient_step_project(const DenseMatrix& y, const DenseMatrix& grad, double step);

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);

namespace serial {
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix hadamard_mul_div(const DenseMatrix& a, const DenseMatrix& num,
                             const DenseMatrix& den, double eps);
DenseMatrix project_nonneg(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);
double sq_frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm_diff(const DenseMatrix& a, const DenseMatrix& b);
double dot(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix extrapolate(const DenseMatrix& h, const DenseMatrix& h_prev, double beta);
DenseMatrix gradient_step_project(const DenseMatrix& y, const DenseMatrix& grad, double step);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);
}  // namespace serial

}  // namespace dnsnmf::kernels
