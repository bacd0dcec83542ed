#include "dnsnmf/nndsvd.hpp"

#include <algorithm>
#include <cmath>

#include "dnsnmf/rng.hpp"
#include "dnsnmf/svd.hpp"

namespace dnsnmf {

namespace {

struct Section {
  std::vector<double> pos, neg;
  double pos_norm = 0.0, neg_norm = 0.0;
};

Section split_signs(const DenseMatrix& m, index_t col) {
  Section s;
  const index_t d = m.rows();
  s.pos.resize(static_cast<std::size_t>(d));
  s.neg.resize(static_cast<std::size_t>(d));
  for (index_t i = 0; i < d; ++i) {
    const double v = m(i, col);
    const double pos = std::max(0.0, v);
    const double neg = std::max(0.0, -v);
    s.pos[static_cast<std::size_t>(i)] = pos;
    s.neg[static_cast<std::size_t>(i)] = neg;
    s.pos_norm += pos * pos;
    s.neg_norm += neg * neg;
  }
  s.pos_norm = std::sqrt(s.pos_norm);
  s.neg_norm = std::sqrt(s.neg_norm);
  return s;
}

}  // namespace

InitPair nndsvd(const DenseMatrix& x, index_t r, double floor, std::uint64_t noise_seed) {
  if (!x.all_nonnegative()) throw DomainError("nndsvd: x must be element-wise nonnegative");
  if (r < 1 || r > std::min(x.rows(), x.cols())) {
    throw DimensionError("nndsvd: r = " + std::to_string(r) + " out of range for " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
  if (floor < 0.0) throw ParameterError("nndsvd: floor must be >= 0");

  const index_t p = x.rows();
  const index_t n = x.cols();
  const ThinSvd svd = thin_svd(x, r);

  InitPair out;
  out.z0 = DenseMatrix(p, r);
  out.h0 = DenseMatrix(r, n);

  Rng noise(derive_seed(noise_seed, 0x6e64u));
  const double noise_mean = x.mean() * 1e-2;

  for (index_t j = 0; j < r; ++j) {
    const double sv = svd.singular_values[static_cast<std::size_t>(j)];
    const Section us = split_signs(svd.u, j);
    const Section vs = split_signs(svd.v, j);
    const double term_pos = us.pos_norm * vs.pos_norm;
    const double term_neg = us.neg_norm * vs.neg_norm;
    const double term = std::max(term_pos, term_neg);

    if (sv <= 0.0 || term <= 0.0) {
      // No usable nonnegative section at this rank; fall back to noise.
      ++out.noise_filled_components;
      for (index_t i = 0; i < p; ++i) out.z0(i, j) = noise.uniform(0.0, 2.0 * noise_mean);
      for (index_t i = 0; i < n; ++i) out.h0(j, i) = noise.uniform(0.0, 2.0 * noise_mean);
      continue;
    }

    const bool use_pos = term_pos >= term_neg;
    const std::vector<double>& uu = use_pos ? us.pos : us.neg;
    const std::vector<double>& vv = use_pos ? vs.pos : vs.neg;
    const double un = use_pos ? us.pos_norm : us.neg_norm;
    const double vn = use_pos ? vs.pos_norm : vs.neg_norm;
    const double root = std::sqrt(sv * term);
    for (index_t i = 0; i < p; ++i) out.z0(i, j) = root / un * uu[static_cast<std::size_t>(i)];
    for (index_t i = 0; i < n; ++i) out.h0(j, i) = root / vn * vv[static_cast<std::size_t>(i)];
  }

  if (floor > 0.0) {
    for (double& v : out.z0.values()) v = std::max(v, floor);
    for (double& v : out.h0.values()) v = std::max(v, floor);
  }
  return out;
}

}  // namespace dnsnmf
