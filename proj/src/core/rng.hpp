#pragma once

#include <cstdint>

namespace olab {

// 64-bit avalanche finalizer (the SplitMix64 mixing function).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based generator: draw i of stream (seed, stream) is a pure function of
// (seed, stream, i). Replay, per-chunk splitting, and cross-platform agreement
// are all trivial consequences; no hidden global state anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix64(mix64(seed + 0x9e3779b97f4a7c15ull) ^
                    mix64(stream + 0x632be59bd9b4e019ull))) {}

  std::uint64_t next_u64() { return mix64(base_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform sign in {-1, +1}.
  int next_sign() { return (next_u64() >> 63) ? +1 : -1; }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t lim = ~0ull - ~0ull % n;
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v < lim) return v % n;
    }
  }

  // Sample an index from a weight vector (weights >= 0, sum ~ 1).
  template <class WeightsT>
  int next_index(const WeightsT& w) {
    double u = next_unit();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      u -= w[i];
      if (u < 0) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
  }

 private:
  std::uint64_t base_;
  std::uint64_t ctr_ = 0;
};

}  // namespace olab
