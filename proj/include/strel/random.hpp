#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

#include "strel/errors.hpp"

namespace strel {

// Splittable counter-based PRNG. A stream is a 64-bit key plus a counter;
// draws mix the counter, so the same seed always replays the same sequence,
// and split(i) derives an independent child stream from (key, i) alone,
// regardless of how many values the parent has produced.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), state_(mix(seed ^ kInit)) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream for slot `index`. Position-independent: splitting before or
  // after drawing from the parent yields the same child.
  RandomStream split(std::uint64_t index) const {
    return RandomStream(mix(seed_ + kGolden * (index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t uniform_int(std::uint64_t bound) {
    assert(bound > 0);
    // Rejection sampling on the top of the range to avoid modulo bias.
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kInit = 0x2545f4914f6cdd1dULL;

  // splitmix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

// Number of inactive rounds before an edge with probability p fires:
// P(X = k) = (1-p)^k * p for k >= 0. p must lie in (0, 1].
inline std::uint64_t geometric_draw(double p, RandomStream& rng) {
  if (!(p > 0.0) || p > 1.0) throw bad_argument("geometric_draw: p must be in (0,1]");
  if (p == 1.0) return 0;
  double u = rng.next_double();  // in [0, 1)
  double x = std::floor(std::log1p(-u) / std::log1p(-p));
  if (x >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(x);
}

}  // namespace strel
