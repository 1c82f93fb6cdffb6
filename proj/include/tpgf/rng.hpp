#pragma once

#include <cstdint>

namespace tpgf {

// SplitMix64 generator (Steele, Lea & Flood 2014). One 64-bit word of state,
// identical output on every platform. All randomness in this project flows
// through this type; std:: distributions are avoided because their output is
// implementation-defined.
//
// Stream splitting: child_seed = mix(parent_seed, label). Distinct labels give
// statistically independent streams, so training episodes, mutation and
// evaluation scenarios never share draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform in [0, n). Multiply-shift bound; bias is O(n / 2^64).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform integer in [lo, hi], both ends inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(double p) { return next_unit() < p; }

  // Child stream derived from the current state.
  Rng split(std::uint64_t label) const { return Rng(mix(state_, label)); }

  static constexpr std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // child_seed = mix(parent_seed, label).
  static constexpr std::uint64_t mix(std::uint64_t parent, std::uint64_t label) {
    return scramble(parent + 0x9e3779b97f4a7c15ull * (label + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace tpgf
