#pragma once

// Deterministic, platform-independent random number generation
// (xoshiro256++ seeded through splitmix64). std:: distributions are
// implementation-defined, so the few transforms we need are spelled out here;
// reproducibility of every run and sweep hinges on this file.

#include <cmath>
#include <cstdint>

namespace cogpow {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  // derive an independent stream, stable across platforms
  Rng spawn(std::uint64_t tag) {
    std::uint64_t mix = next() ^ (0xA0761D6478BD642Full * (tag + 1));
    return Rng(mix);
  }

  std::uint64_t next() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // unit-mean exponential draw (e.g. Rayleigh power fading coefficient)
  double exponential() { return -std::log1p(-uniform01()); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace cogpow
