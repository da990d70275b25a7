#pragma once

#include <cstdint>
#include <random>

namespace aggdiff {

/// Deterministic uniform double in [lo, hi). Uses the top 53 bits of the
/// generator output directly so results do not depend on the standard
/// library's distribution implementation.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

/// Uniform integer in [lo, hi] via rejection-free scaling (bias is
/// negligible for the small ranges used here).
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Derives an independent stream seed, so parallel work items can each own
/// a generator with reproducible, order-independent results.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 mix of (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace aggdiff
