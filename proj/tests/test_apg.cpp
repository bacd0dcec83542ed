#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "dnsnmf/apg.hpp"
#include "dnsnmf/dense_matrix.hpp"
#include "dnsnmf/error.hpp"
#include "dnsnmf/kernels.hpp"
#include "dnsnmf/rng.hpp"
#include "test_util.hpp"

using namespace dnsnmf;
using testutil::random_matrix;
using testutil::random_nonneg;

namespace {

// Central finite differences of an objective, compared in Frobenius norm.
template <typename Objective>
DenseMatrix fd_gradient(const Objective& f, const DenseMatrix& at, double delta = 1e-6) {
  DenseMatrix g(at.rows(), at.cols());
  DenseMatrix probe = at;
  for (index_t i = 0; i < at.rows(); ++i) {
    for (index_t j = 0; j < at.cols(); ++j) {
      const double v = at(i, j);
      const double d = delta * std::max(1.0, std::abs(v));
      probe(i, j) = v + d;
      const double up = f(probe);
      probe(i, j) = v - d;
      const double down = f(probe);
      probe(i, j) = v;
      g(i, j) = (up - down) / (2.0 * d);
    }
  }
  return g;
}

double rel_diff(const DenseMatrix& got, const DenseMatrix& want) {
  return kernels::frobenius_norm_diff(got, want) / std::max(1.0, kernels::frobenius_norm(want));
}

// Plain projected gradient, the O(1/k) baseline the accelerated solver must beat.
DenseMatrix projected_gradient(const GradientFn& grad, double lipschitz, DenseMatrix h,
                               int iters) {
  for (int k = 0; k < iters; ++k) {
    h = kernels::gradient_step_project(h, grad(h), 1.0 / lipschitz);
  }
  return h;
}

}  // namespace

TEST_CASE("problem construction caches the right products") {
  DenseMatrix a = DenseMatrix::from_rows({{1.0, 0.0}, {1.0, 1.0}, {0.0, 2.0}});
  DenseMatrix x = DenseMatrix::from_rows({{1.0}, {2.0}, {3.0}});
  NnlsProblem p = NnlsProblem::make(a, x);
  CHECK(p.gram == DenseMatrix::from_rows({{2.0, 1.0}, {1.0, 5.0}}));
  CHECK(p.cross == DenseMatrix::from_rows({{3.0}, {8.0}}));
  CHECK(p.target_sq_norm == doctest::Approx(14.0));
  CHECK(p.variable_shape().first == 2);
  CHECK(p.variable_shape().second == 1);

  CHECK_THROWS_AS(NnlsProblem::make(DenseMatrix(3, 2), DenseMatrix(4, 1)), DimensionError);
  CHECK_THROWS_AS(SandwichProblem::make(DenseMatrix(3, 2), DenseMatrix(2, 5), DenseMatrix(4, 5)),
                  DimensionError);
  CHECK_THROWS_AS(SandwichProblem::make(DenseMatrix(3, 2), DenseMatrix(2, 5), DenseMatrix(3, 4)),
                  DimensionError);

  CHECK_THROWS_AS(nnls_gradient(p, DenseMatrix(3, 1)), DimensionError);
  SandwichProblem sp = SandwichProblem::make(DenseMatrix(3, 2), DenseMatrix(4, 5),
                                             DenseMatrix(3, 5));
  CHECK(sp.variable_shape().first == 2);
  CHECK(sp.variable_shape().second == 4);
  CHECK_THROWS_AS(sandwich_gradient(sp, DenseMatrix(4, 2)), DimensionError);
}

TEST_CASE("nnls_gradient") {
  SUBCASE("vanishes at the unconstrained optimum with identity design") {
    Rng rng(1);
    DenseMatrix x = random_nonneg(4, 3, rng);
    NnlsProblem p = NnlsProblem::make(DenseMatrix::identity(4), x);
    CHECK(nnls_gradient(p, x) == DenseMatrix(4, 3));
  }

  SUBCASE("scalar example") {
    NnlsProblem p = NnlsProblem::make(DenseMatrix::from_rows({{2.0}}),
                                      DenseMatrix::from_rows({{4.0}}));
    DenseMatrix g = nnls_gradient(p, DenseMatrix::from_rows({{1.0}}));
    CHECK(g(0, 0) == doctest::Approx(-4.0));  // 4*1 - 2*4
  }

  SUBCASE("matches central finite differences") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      index_t m = 2 + rng.uniform_int(7);
      index_t r = 1 + rng.uniform_int(7);
      index_t n = 1 + rng.uniform_int(7);
      DenseMatrix a = random_matrix(m, r, rng, -1.0, 1.0);
      DenseMatrix x = random_matrix(m, n, rng, -1.0, 1.0);
      NnlsProblem p = NnlsProblem::make(a, x);
      DenseMatrix h = random_matrix(r, n, rng, -1.0, 1.0);

      auto f = [&](const DenseMatrix& v) {
        return 0.5 * kernels::sq_frobenius_diff(x, kernels::matmul(a, v));
      };
      CHECK(rel_diff(nnls_gradient(p, h), fd_gradient(f, h)) < 1e-5);
      CHECK(nnls_objective(p, h) == doctest::Approx(f(h)).epsilon(1e-10));
    }
  }
}

TEST_CASE("sandwich_gradient") {
  SUBCASE("identity sandwich reduces to z - x") {
    Rng rng(3);
    DenseMatrix x = random_matrix(4, 4, rng, -1.0, 1.0);
    DenseMatrix z = random_nonneg(4, 4, rng);
    SandwichProblem p = SandwichProblem::make(DenseMatrix::identity(4),
                                              DenseMatrix::identity(4), x);
    CHECK(sandwich_gradient(p, z) == kernels::subtract(z, x));
  }

  SUBCASE("vanishes when the target is reproduced exactly") {
    Rng rng(4);
    DenseMatrix a = random_matrix(5, 3, rng, -1.0, 1.0);
    DenseMatrix z = random_nonneg(3, 2, rng);
    DenseMatrix b = random_matrix(2, 6, rng, -1.0, 1.0);
    DenseMatrix x = kernels::matmul(a, kernels::matmul(z, b));
    SandwichProblem p = SandwichProblem::make(a, b, x);
    CHECK(kernels::frobenius_norm(sandwich_gradient(p, z)) < 1e-9);
  }

  SUBCASE("matches central finite differences") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      DenseMatrix a = random_matrix(4, 3, rng, -1.0, 1.0);
      DenseMatrix z = random_matrix(3, 2, rng, -1.0, 1.0);
      DenseMatrix b = random_matrix(2, 5, rng, -1.0, 1.0);
      DenseMatrix x = random_matrix(4, 5, rng, -1.0, 1.0);
      SandwichProblem p = SandwichProblem::make(a, b, x);

      auto f = [&](const DenseMatrix& v) {
        return 0.5 * kernels::sq_frobenius_diff(x, kernels::matmul(a, kernels::matmul(v, b)));
      };
      CHECK(rel_diff(sandwich_gradient(p, z), fd_gradient(f, z)) < 1e-5);
      CHECK(sandwich_objective(p, z) == doctest::Approx(f(z)).epsilon(1e-10));
    }
  }
}

TEST_CASE("lipschitz constants") {
  NnlsProblem eye = NnlsProblem::make(DenseMatrix::identity(3), DenseMatrix(3, 2));
  CHECK(nnls_lipschitz(eye) == doctest::Approx(1.01).epsilon(1e-8));

  NnlsProblem diag = NnlsProblem::make(DenseMatrix::from_rows({{3.0, 0.0}, {0.0, 1.0}}),
                                       DenseMatrix(2, 1));
  CHECK(nnls_lipschitz(diag) == doctest::Approx(9.0 * 1.01).epsilon(1e-8));

  SandwichProblem ones = SandwichProblem::make(DenseMatrix::identity(2),
                                               DenseMatrix::identity(2), DenseMatrix(2, 2));
  CHECK(sandwich_lipschitz(ones) == doctest::Approx(1.01).epsilon(1e-8));

  SandwichProblem scalars = SandwichProblem::make(DenseMatrix::from_rows({{2.0}}),
                                                  DenseMatrix::from_rows({{3.0}}),
                                                  DenseMatrix::from_rows({{1.0}}));
  CHECK(sandwich_lipschitz(scalars) == doctest::Approx(36.0 * 1.01).epsilon(1e-8));

  SUBCASE("nnls constant equals the squared top singular value") {
    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
      DenseMatrix a = random_matrix(6, 4, rng, -1.0, 1.0);
      NnlsProblem p = NnlsProblem::make(a, DenseMatrix(6, 2));
      Eigen::MatrixXd ea =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>(a.data(), a.rows(), a.cols());
      const double smax = Eigen::JacobiSVD<Eigen::MatrixXd>(ea).singularValues()(0);
      CHECK(nnls_lipschitz(p, 1.0) == doctest::Approx(smax * smax).epsilon(1e-6));
    }
  }

  SUBCASE("gradient differences never exceed the safety-factored constant") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
      DenseMatrix a = random_matrix(5, 3, rng, -1.0, 1.0);
      DenseMatrix b = random_matrix(2, 6, rng, -1.0, 1.0);
      DenseMatrix x = random_matrix(5, 6, rng, -1.0, 1.0);
      SandwichProblem p = SandwichProblem::make(a, b, x);
      const double lip = sandwich_lipschitz(p);

      DenseMatrix z1 = random_matrix(3, 2, rng, -2.0, 2.0);
      DenseMatrix z2 = random_matrix(3, 2, rng, -2.0, 2.0);
      const double lhs = kernels::frobenius_norm_diff(sandwich_gradient(p, z1),
                                                      sandwich_gradient(p, z2));
      const double rhs = lip * kernels::frobenius_norm_diff(z1, z2);
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("momentum recurrence") {
  const double a1 = apg_momentum_next(1.0);
  CHECK(a1 == doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))).epsilon(1e-15));
  const double a2 = apg_momentum_next(a1);
  CHECK(a2 == doctest::Approx(2.193527085331054).epsilon(1e-12));

  // alpha_k^2 - alpha_k = alpha_{k-1}^2 holds with equality in real
  // arithmetic; allow relative rounding slack.
  double alpha = 1.0;
  for (int k = 0; k < 10000; ++k) {
    const double next = apg_momentum_next(alpha);
    CHECK(next * next - next <= alpha * alpha * (1.0 + 1e-12) + 1e-12);
    CHECK(next >= 1.0);
    alpha = next;
  }
}

TEST_CASE("apg_step") {
  Rng rng(8);
  DenseMatrix x = random_nonneg(4, 3, rng);
  NnlsProblem p = NnlsProblem::make(DenseMatrix::identity(4), x);
  GradientFn grad = [&](const DenseMatrix& h) { return nnls_gradient(p, h); };

  SUBCASE("state bookkeeping") {
    ApgState st(DenseMatrix(4, 3), 1.0);
    CHECK(st.k == 0);
    CHECK(st.alpha == 1.0);
    apg_step(st, grad);
    CHECK(st.k == 1);
    CHECK(st.alpha == doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))));
    // gradient step from y = 0 at L = 1 lands exactly on x
    CHECK(st.h_current == x);
    CHECK(st.h_previous == DenseMatrix(4, 3));
  }

  SUBCASE("iterates stay nonnegative even when y goes negative") {
    DenseMatrix target = DenseMatrix::from_rows({{-2.0, 1.0}, {1.0, -2.0}});
    NnlsProblem q = NnlsProblem::make(DenseMatrix::identity(2), target);
    GradientFn g = [&](const DenseMatrix& h) { return nnls_gradient(q, h); };
    ApgState st(DenseMatrix::constant(2, 2, 1.0), 1.0);
    for (int k = 0; k < 20; ++k) {
      apg_step(st, g);
      CHECK(st.h_current.all_nonnegative());
    }
  }

  SUBCASE("invalid construction") {
    CHECK_THROWS_AS(ApgState(DenseMatrix(2, 2), 0.0), ParameterError);
    CHECK_THROWS_AS(ApgState(DenseMatrix::from_rows({{-1.0}}), 1.0), DomainError);
  }

  SUBCASE("non-finite gradient raises NumericalError with the iteration index") {
    int calls = 0;
    GradientFn bad = [&](const DenseMatrix& h) {
      if (++calls >= 4) {
        return DenseMatrix::constant(h.rows(), h.cols(),
                                     std::numeric_limits<double>::quiet_NaN());
      }
      return grad(h);
    };
    ApgState st(DenseMatrix(4, 3), 1.0);
    try {
      for (int k = 0; k < 10; ++k) apg_step(st, bad);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(e.iteration() == 3);
    }
  }
}

TEST_CASE("apg_solve") {
  SUBCASE("identity design converges in one effective step") {
    DenseMatrix x = DenseMatrix::from_rows({{0.25, 1.5}, {2.0, 0.125}});
    NnlsProblem p = NnlsProblem::make(DenseMatrix::identity(2), x);
    ApgResult res = apg_solve([&](const DenseMatrix& h) { return nnls_gradient(p, h); },
                              [&](const DenseMatrix& h) { return nnls_objective(p, h); },
                              1.0, DenseMatrix(2, 2), ApgOptions{1e-6, 50});
    CHECK(res.converged);
    CHECK(res.iterations <= 3);
    CHECK(testutil::max_abs_diff(res.solution, x) < 1e-12);
    CHECK(res.objective < 1e-20);
  }

  SUBCASE("matches a long projected-gradient run on feasible NNLS") {
    Rng rng(9);
    DenseMatrix a = random_nonneg(10, 6, rng);
    DenseMatrix hstar = random_nonneg(6, 8, rng);
    DenseMatrix x = kernels::matmul(a, hstar);
    NnlsProblem p = NnlsProblem::make(a, x);
    const double lip = nnls_lipschitz(p);
    GradientFn grad = [&](const DenseMatrix& h) { return nnls_gradient(p, h); };
    ObjectiveFn obj = [&](const DenseMatrix& h) { return nnls_objective(p, h); };

    DenseMatrix init = random_nonneg(6, 8, rng);
    DenseMatrix pg = projected_gradient(grad, lip, init, 100000);
    ApgResult res = apg_solve(grad, obj, lip, init, ApgOptions{1e-12, 5000});

    CHECK(res.solution.all_nonnegative());
    CHECK(std::abs(res.objective - obj(pg)) < 1e-6);
    CHECK(res.objective <= res.initial_objective + 1e-10 * std::max(1.0, res.initial_objective));
  }

  SUBCASE("reaches a 1e-6 objective gap in fewer iterations than plain PG") {
    Rng rng(10);
    DenseMatrix a = random_nonneg(12, 5, rng);
    DenseMatrix x = kernels::matmul(a, random_nonneg(5, 7, rng));
    NnlsProblem p = NnlsProblem::make(a, x);
    const double lip = nnls_lipschitz(p);
    GradientFn grad = [&](const DenseMatrix& h) { return nnls_gradient(p, h); };
    ObjectiveFn obj = [&](const DenseMatrix& h) { return nnls_objective(p, h); };
    DenseMatrix init = DenseMatrix::constant(5, 7, 0.5);

    const double fstar = obj(projected_gradient(grad, lip, init, 100000));

    int pg_iters = 0;
    {
      DenseMatrix h = init;
      while (obj(h) - fstar > 1e-6 && pg_iters < 100000) {
        h = kernels::gradient_step_project(h, grad(h), 1.0 / lip);
        ++pg_iters;
      }
    }
    int apg_iters = 0;
    {
      ApgState st(init, lip);
      double best = obj(st.h_current);
      while (best - fstar > 1e-6 && apg_iters < 100000) {
        apg_step(st, grad);
        best = std::min(best, obj(st.h_current));
        ++apg_iters;
      }
    }
    CHECK(apg_iters < pg_iters);
  }

  SUBCASE("descent property on random instances") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      DenseMatrix a = random_matrix(8, 4, rng, -1.0, 1.0);
      DenseMatrix x = random_matrix(8, 5, rng, -1.0, 1.0);
      NnlsProblem p = NnlsProblem::make(a, x);
      ApgResult res = apg_solve([&](const DenseMatrix& h) { return nnls_gradient(p, h); },
                                [&](const DenseMatrix& h) { return nnls_objective(p, h); },
                                nnls_lipschitz(p), random_nonneg(4, 5, rng),
                                ApgOptions{1e-6, 50});
      CHECK(res.solution.all_nonnegative());
      CHECK(res.objective <=
            res.initial_objective + 1e-10 * std::max(1.0, res.initial_objective));
    }
  }
}
