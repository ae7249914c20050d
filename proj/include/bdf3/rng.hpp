#pragma once

#include <cstdint>

namespace bdf3 {

// SplitMix64 (Steele/Lea/Flood 2014). The state advances by the golden-gamma
// increment 0x9E3779B97F4A7C15 and the output is a finalizer-mixed copy of it:
//
//   state += 0x9E3779B97F4A7C15
//   z  = state
//   z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   out = z ^ (z >> 31)
//
// The generator is written out in full (instead of using std::mt19937_64) so
// that every seeded table in this project can be reproduced from the constants
// above alone, independent of the standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1): the top 53 bits placed at the center
  // of their 2^-53 cell, so 0 and 1 are never returned.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Decorrelated child stream for (seed, index) pairs; the result depends only
  // on the pair, never on draw order elsewhere.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(index);
    return SplitMix64(seed ^ g.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace bdf3
