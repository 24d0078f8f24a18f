#pragma once

#include <cstdint>

namespace mtbl {

// SplitMix64. Used instead of <random> engines so that generated corpora are
// byte-identical across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Modulo bias is negligible for the small n used here
  // and keeps the draw sequence trivially reproducible.
  uint64_t below(uint64_t n) { return next() % n; }

  // Uniform in [lo, hi] inclusive.
  int64_t range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// Stateless hash of a (seed, counter, lane) triple to a uniform in [0, 1).
// Lets noise decisions be independent of how many draws the structural
// generator consumed.
inline double counter_unit(uint64_t seed, uint64_t counter, uint64_t lane) {
  Rng r(seed ^ (counter * 0x9e3779b97f4a7c15ULL) ^ (lane << 32));
  r.next();
  return r.unit();
}

}  // namespace mtbl
