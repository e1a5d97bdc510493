#pragma once

#include <cstdint>

namespace fountain {

inline constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Small deterministic generator used everywhere randomness is needed at
// runtime (symbol neighbor draws, channel erasures, seeded permutations).
// A stream is fully determined by its seed; per-symbol streams mix the
// encoding symbol id into the seed so that any symbol can be regenerated
// in isolation.
class SplitMix {
 public:
  explicit SplitMix(uint64_t seed) : state_(mix64(seed)) {}
  SplitMix(uint64_t seed, uint64_t stream) : state_(mix64(seed ^ stream * kGoldenGamma)) {}

  uint64_t next() {
    uint64_t z = mix64(state_);
    state_ += kGoldenGamma;
    return z;
  }

  // Uniform in [0, 1): top 53 bits of a draw.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1.
  uint64_t below(uint64_t n) {
    uint64_t v = static_cast<uint64_t>(uniform() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  bool coin(double p) { return uniform() < p; }

 private:
  uint64_t state_;
};

// Derives an independent child seed; used to key per-trial / per-point
// streams in simulations so aggregation order never matters.
inline constexpr uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  uint64_t s = mix64(seed ^ (a + 1) * kGoldenGamma);
  return mix64(s ^ (b + 1) * 0xD1B54A32D192ED03ull);
}

}  // namespace fountain
