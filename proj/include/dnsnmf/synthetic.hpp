#pragma once

#include <cstdint>
#include <vector>

#include "dnsnmf/clustering.hpp"
#include "dnsnmf/deep_nsnmf.hpp"
#include "dnsnmf/dense_matrix.hpp"

namespace dnsnmf {

/// Seeded two-layer synthetic dataset: X = Z_1 S_1 Z_2 S_2 H_2 (+ optional
/// nonnegative noise). Z_1 holds localized parts, Z_2 combines parts into
/// archetypes, and each column of H_2 is dominated by one archetype row — the
/// planted cluster id. dims must have exactly two entries [r_1, r_2]; the
/// number of clusters equals r_2.
struct SyntheticSpec {
  index_t p = 20;
  index_t n = 60;
  std::vector<index_t> dims{8, 4};
  double theta = 0.3;
  /// Noise amplitude relative to the clean data mean: each entry gains
  /// noise * mean(X_clean) * U[0,1).
  double noise = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  DenseMatrix x;
  LabelVector labels;  ///< planted cluster of each column, sample s -> s mod r_2
  LayerStack stack;    ///< the generating factors; reconstruct(stack) == x when noise = 0
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace dnsnmf
