#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace percoscan {

// Seeding and double conversion are pinned down here so that identical seeds
// give bit-identical streams on every platform. std::mt19937_64 raw output is
// specified by the standard; the distribution transforms (which the standard
// leaves implementation-defined) are implemented in NoiseModel/RandomStream
// instead of <random> distributions.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Collapses a list of words into one stream seed. Used to derive disjoint
/// per-(tag, n, seed, ...) substreams deterministically.
inline std::uint64_t seed_mix(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x853C49E6748FEA9BULL;
  for (std::uint64_t w : words) h = splitmix64(h ^ w);
  return h;
}

/// Seedable, portable random stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1), never exactly 0 or 1 (safe under log/pow).
  double uniform01_open() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace percoscan
