#pragma once

#include <cstdint>

namespace torelli {

/// Deterministic, platform-independent RNG (splitmix64). All sampling in the
/// library goes through this type so that a seed fully determines every run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n), n >= 1. Rejection sampling, exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  /// Derive an independent child stream; deterministic in (seed, tag).
  Rng child(std::uint64_t tag) {
    std::uint64_t mix = state_ ^ (0x632be59bd9b4e019ULL * (tag + 1));
    return Rng(mix);
  }

 private:
  std::uint64_t state_;
};

}  // namespace torelli
