#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qgame {

namespace detail {
// splitmix64 step; used both for seed expansion and for stream derivation.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic, seedable random stream. Every stochastic operation in the
/// simulator takes one of these explicitly; there is no global RNG state.
///
/// Streams are splittable: derive() hashes the parent seed together with a
/// list of tag words, so sweep cells get independent streams whose identity
/// depends only on (master seed, cell coordinates), never on launch order.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : seed_(seed) {
    // Expand the single word through splitmix64 so that small seeds
    // (0, 1, 2, ...) still produce well-mixed mt19937_64 states.
    uint64_t s = seed;
    std::seed_seq seq{detail::splitmix64(s), detail::splitmix64(s),
                      detail::splitmix64(s), detail::splitmix64(s)};
    engine_.seed(seq);
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits. Avoids
  /// std::uniform_real_distribution so that draw sequences are identical
  /// across standard library implementations.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be >= 1.
  uint32_t next_below(uint32_t n) {
    // Rejection sampling on the top bits; unbiased and deterministic.
    uint64_t threshold = (~uint64_t{0}) - (~uint64_t{0}) % n;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= threshold);
    return static_cast<uint32_t>(x % n);
  }

  bool next_coin() { return (next_u64() >> 63) != 0; }

  /// Child stream keyed by (this stream's seed, tags...). Derivation does
  /// not consume randomness from the parent.
  RngStream derive(std::initializer_list<uint64_t> tags) const {
    uint64_t s = seed_;
    uint64_t acc = detail::splitmix64(s);
    for (uint64_t tag : tags) {
      s ^= tag + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
      acc ^= detail::splitmix64(s);
    }
    return RngStream(acc);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qgame
