#pragma once

#include <cstdint>

namespace bwreg {

// Named substreams expanded from a root seed.
enum class Stream : std::uint64_t {
  Covariates = 1,
  Rotation = 2,
  Scaling = 3,
  Trial = 4,
  Calibration = 5,
  Permutation = 6,
  Reference = 7,
  Noise = 8,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based seed for (root, stream, index). Any single trial can be
// regenerated from its index alone.
constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t index = 0) {
  return mix64(mix64(mix64(root) ^ static_cast<std::uint64_t>(stream)) + index);
}

}  // namespace bwreg
