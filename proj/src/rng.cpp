#include "ddchain/rng.hpp"

namespace ddchain {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform_symmetric() {
  constexpr double kUlp = 1.0 / 9007199254740992.0;  // 2^-53
  for (;;) {
    const std::uint64_t k = next() >> 11;
    if (k != 0) return 2.0 * (static_cast<double>(k) * kUlp) - 1.0;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, RngStream stream, std::uint64_t index) {
  std::uint64_t h = mix64(seed + kGolden * static_cast<std::uint64_t>(stream));
  return mix64(h ^ (index * 0xD6E8FEB86659FD93ULL + kGolden));
}

}  // namespace ddchain
