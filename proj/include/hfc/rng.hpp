#pragma once

#include <cstdint>
#include <initializer_list>

namespace hfc {

/// Deterministic 64-bit splittable generator (splitmix64 core).
///
/// Every stochastic routine in this library takes an explicit 64-bit seed and
/// derives private streams with `derive_stream`, so results are reproducible
/// bit for bit across runs and independent of scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), bound >= 1.
  uint64_t below(uint64_t bound) {
    // Multiply-shift; bias is < 2^-64 * bound, negligible for bounds here.
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  uint64_t state_;
};

/// Hash-combines a master seed with stream labels into an independent child
/// seed (splitmix64 mixing of each label in turn).
inline uint64_t derive_stream(uint64_t seed, std::initializer_list<uint64_t> labels) {
  Rng mix(seed);
  uint64_t out = mix.next_u64();
  for (uint64_t label : labels) {
    Rng step(out ^ (label + 0x9e3779b97f4a7c15ull));
    out = step.next_u64();
  }
  return out;
}

inline uint64_t derive_stream(uint64_t seed, uint64_t label) {
  return derive_stream(seed, {label});
}

}  // namespace hfc
