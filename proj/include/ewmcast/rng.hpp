#pragma once

#include <cstdint>

namespace ewmcast {

// SplitMix64. Used both as the packet-level random source and to derive
// independent sub-stream seeds from (seed, lane) tuples, so results are
// identical no matter how trials are scheduled.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t lane) {
  SplitMix64 g(seed ^ (lane + 1) * 0x9e3779b97f4a7c15ULL);
  g.next();
  return g.next();
}

}  // namespace ewmcast
