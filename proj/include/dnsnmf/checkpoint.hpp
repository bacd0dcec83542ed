#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnsnmf/deep_nsnmf.hpp"

namespace dnsnmf {

/// Serialized factorization state. The container is a single binary file,
/// little-endian throughout:
///
///   magic   "DNSNMF01" (8 bytes)
///   u64     seed
///   i64     m (layer count)
///   i64[m]  dims r_1..r_m
///   f64[m]  thetas
///   i64     array count (m + 1)
///   arrays  { u16 name length; name bytes; i64 rows; i64 cols; f64 data }
///           named "Z1".."Zm" then "H", row-major
///   i64     sweep count
///   sweeps  { i64 sweep index; f64 objective; i64 block count; i64[] inner iters }
///
/// Doubles are stored as raw IEEE-754 bits, so save/load round-trips are
/// bit-exact. Wall-clock timings are deliberately not stored: a checkpoint of
/// the same run must be byte-identical across reruns.
struct Checkpoint {
  std::uint64_t seed = 0;
  LayerStack stack;
  std::vector<SweepReport> sweeps;
};

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace dnsnmf
