// Times the OpenMP kernel path against the serial reference and checks that
// both produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dnsnmf/kernels.hpp"
#include "dnsnmf/rng.hpp"

namespace {

using dnsnmf::DenseMatrix;
using dnsnmf::index_t;

DenseMatrix random_matrix(index_t rows, index_t cols, std::uint64_t seed) {
  dnsnmf::Rng rng(seed);
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform();
  return m;
}

double time_best_of(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

struct Case {
  std::string name;
  std::function<DenseMatrix()> parallel;
  std::function<DenseMatrix()> serial;
};

}  // namespace

int main(int argc, char** argv) {
  index_t size = 384;
  int reps = 5;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--size" && i + 1 < argc) {
      size = std::stoll(argv[++i]);
    } else if (arg == "--reps" && i + 1 < argc) {
      reps = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: bench_kernels [--size N] [--reps R]\n");
      return 1;
    }
  }

  const DenseMatrix a = random_matrix(size, size, 11);
  const DenseMatrix b = random_matrix(size, size, 12);
  namespace k = dnsnmf::kernels;

  const std::vector<Case> cases = {
      {"matmul", [&] { return k::matmul(a, b); }, [&] { return k::serial::matmul(a, b); }},
      {"matmul_tn", [&] { return k::matmul_tn(a, b); },
       [&] { return k::serial::matmul_tn(a, b); }},
      {"matmul_nt", [&] { return k::matmul_nt(a, b); },
       [&] { return k::serial::matmul_nt(a, b); }},
      {"hadamard_mul_div", [&] { return k::hadamard_mul_div(a, b, b, 1e-12); },
       [&] { return k::serial::hadamard_mul_div(a, b, b, 1e-12); }},
      {"extrapolate", [&] { return k::extrapolate(a, b, 0.5); },
       [&] { return k::serial::extrapolate(a, b, 0.5); }},
      {"gradient_step_project", [&] { return k::gradient_step_project(a, b, 0.25); },
       [&] { return k::serial::gradient_step_project(a, b, 0.25); }},
  };

  std::printf("kernel                      parallel_ms     serial_ms   speedup  bitwise\n");
  bool all_equal = true;
  for (const Case& c : cases) {
    const DenseMatrix rp = c.parallel();
    const DenseMatrix rs = c.serial();
    const bool equal = rp == rs;
    all_equal = all_equal && equal;
    const double tp = time_best_of([&] { c.parallel(); }, reps);
    const double ts = time_best_of([&] { c.serial(); }, reps);
    std::printf("%-26s %12.3f %13.3f %9.2f  %s\n", c.name.c_str(), tp, ts, ts / tp,
                equal ? "yes" : "NO");
  }

  // Scalar reductions.
  const double fp = k::frobenius_norm(a);
  const double fs = k::serial::frobenius_norm(a);
  const double dp = k::dot(a, b);
  const double ds = k::serial::dot(a, b);
  const bool scalars_equal = fp == fs && dp == ds;
  all_equal = all_equal && scalars_equal;
  const double tfp = time_best_of([&] { k::frobenius_norm(a); }, reps);
  const double tfs = time_best_of([&] { k::serial::frobenius_norm(a); }, reps);
  std::printf("%-26s %12.3f %13.3f %9.2f  %s\n", "frobenius_norm", tfp, tfs, tfs / tfp,
              scalars_equal ? "yes" : "NO");

  if (!all_equal) {
    std::fprintf(stderr, "parallel and serial kernels disagree\n");
    return 1;
  }
  return 0;
}
