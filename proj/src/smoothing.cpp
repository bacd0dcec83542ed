#include "dnsnmf/smoothing.hpp"

namespace dnsnmf {

DenseMatrix smoothing_matrix(const SmoothingSpec& spec) {
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0)) {
    throw ParameterError("smoothing_matrix: theta must lie in [0, 1]");
  }
  if (spec.r < 1) throw ParameterError("smoothing_matrix: r must be >= 1");

  const double off = spec.theta / static_cast<double>(spec.r);
  const double diag = (1.0 - spec.theta) + off;
  DenseMatrix s(spec.r, spec.r);
  for (index_t i = 0; i < spec.r; ++i) {
    for (index_t j = 0; j < spec.r; ++j) s(i, j) = i == j ? diag : off;
  }
  return s;
}

}  // namespace dnsnmf
