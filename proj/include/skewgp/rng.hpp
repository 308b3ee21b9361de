#pragma once

#include <cstdint>
#include <random>

namespace skewgp {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`. Streams depend only on the pair,
/// so work split across threads draws the same numbers as a serial loop.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Engine stream_for(std::uint64_t master, std::uint64_t index) {
  return Engine(derive_seed(master, index));
}

/// Standard normal draw. A fresh distribution per call keeps draws a pure
/// function of the engine state.
inline double standard_normal(Engine& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace skewgp
