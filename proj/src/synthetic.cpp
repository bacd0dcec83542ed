#include "dnsnmf/synthetic.hpp"

#include <algorithm>

#include "dnsnmf/rng.hpp"

namespace dnsnmf {

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.dims.size() != 2) {
    throw ParameterError("generate_synthetic: dims must be [r1, r2]");
  }
  const index_t p = spec.p;
  const index_t n = spec.n;
  const index_t r1 = spec.dims[0];
  const index_t r2 = spec.dims[1];
  if (p < 1 || n < 1) throw ParameterError("generate_synthetic: p and n must be >= 1");
  if (r1 < 1 || r2 < 1 || r1 > p || r2 > r1 || r2 > n) {
    throw ParameterError("generate_synthetic: need 1 <= r2 <= r1 <= p and r2 <= n");
  }
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0)) {
    throw ParameterError("generate_synthetic: theta must lie in [0, 1]");
  }
  if (!(spec.noise >= 0.0)) throw ParameterError("generate_synthetic: noise must be >= 0");

  // Z1: localized parts on wrapped contiguous supports over a faint background.
  Rng parts(derive_seed(spec.seed, 1));
  DenseMatrix z1(p, r1);
  const index_t part_len = std::max<index_t>(2, p / r1);
  for (index_t j = 0; j < r1; ++j) {
    for (index_t i = 0; i < p; ++i) z1(i, j) = parts.uniform(0.0, 0.05);
    const index_t start = (j * p) / r1;
    for (index_t t = 0; t < part_len; ++t) z1((start + t) % p, j) = parts.uniform(0.5, 1.5);
  }

  // Z2: archetypes, each mixing a few neighbouring parts.
  Rng arch(derive_seed(spec.seed, 2));
  DenseMatrix z2(r1, r2);
  const index_t mix_len = std::min(r1, std::max<index_t>(2, r1 / r2 + 1));
  for (index_t c = 0; c < r2; ++c) {
    for (index_t i = 0; i < r1; ++i) z2(i, c) = arch.uniform(0.0, 0.05);
    const index_t start = (c * r1) / r2;
    for (index_t t = 0; t < mix_len; ++t) z2((start + t) % r1, c) = arch.uniform(0.5, 1.5);
  }

  // H2: each column dominated by its cluster's archetype row.
  Rng enc(derive_seed(spec.seed, 3));
  DenseMatrix h2(r2, n);
  LabelVector labels(static_cast<std::size_t>(n), 0);
  for (index_t s = 0; s < n; ++s) {
    const index_t c = s % r2;
    labels[static_cast<std::size_t>(s)] = static_cast<int>(c);
    for (index_t i = 0; i < r2; ++i) h2(i, s) = enc.uniform(0.0, 0.1);
    h2(c, s) = enc.uniform(0.8, 1.2);
  }

  SyntheticData out;
  out.stack.z = {std::move(z1), std::move(z2)};
  out.stack.smoothing = {SmoothingSpec{spec.theta, r1}, SmoothingSpec{spec.theta, r2}};
  out.stack.h_top = std::move(h2);
  out.labels = std::move(labels);
  out.x = reconstruct(out.stack);

  if (spec.noise > 0.0) {
    Rng noise(derive_seed(spec.seed, 4));
    const double amplitude = spec.noise * out.x.mean();
    for (double& v : out.x.values()) v += amplitude * noise.uniform();
  }
  return out;
}

}  // namespace dnsnmf
