#pragma once

// Seed derivation and portable uniform draws. std:: distributions are
// implementation-defined, so everything that must be reproducible across
// toolchains goes through these helpers on top of std::mt19937_64.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pdef {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for a named stream: splitmix64(base ^ splitmix64(stream)).
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream));
}

/// Folds a path of stream ids, e.g. split_seed(base, {N, trial}).
inline std::uint64_t split_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  for (auto s : path) base = split_seed(base, s);
  return base;
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform in [0, n) by rejection, n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace pdef
