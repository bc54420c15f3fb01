#pragma once

#include <cstdint>

namespace ddchain {

// splitmix64: state advances by the golden-ratio increment, output is the
// murmur-style finalizer of the new state. Reproducible bit-for-bit on any
// platform with IEEE doubles.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform on the open interval (-1, 1). Top 53 bits k give u = k * 2^-53,
  // mapped to 2u - 1 (exact in binary64); k == 0 would give exactly -1 and
  // is redrawn.
  double uniform_symmetric();

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);

enum class RngStream : std::uint64_t {
  bond_disorder = 1,
  site_disorder = 2,
  period_noise = 3,
  replicate = 4,
};

// Independent seed for (seed, stream, index). Used to split one user seed
// into per-purpose generators without any shared mutable state.
std::uint64_t derive_seed(std::uint64_t seed, RngStream stream, std::uint64_t index = 0);

}  // namespace ddchain
