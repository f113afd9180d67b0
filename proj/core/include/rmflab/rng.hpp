#pragma once

#include <cmath>
#include <cstdint>

namespace rmflab {

inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Per-stream seed: splitmix64(master + index * stride). Injective in index,
// so disjoint indices give disjoint streams and results do not depend on
// which worker executes which index.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + index * kSeedStride);
}

// u64 -> [0, 1), the convention used for Steinhaus phases.
inline double unit_interval(std::uint64_t r) {
  return static_cast<double>(r) * 0x1.0p-64;
}

// Standard normal addressed by (seed, counter); Box-Muller on two derived words.
inline double counter_gaussian(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t r1 = derive_seed(seed, 2 * counter);
  const std::uint64_t r2 = derive_seed(seed, 2 * counter + 1);
  const double u1 = (static_cast<double>(r1 >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(r2 >> 11) * 0x1.0p-53;          // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace rmflab
