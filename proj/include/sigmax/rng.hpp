#pragma once

#include <cstdint>

// Counter-based pseudo-randomness. Every draw is a pure function of
// (seed, counters...), so simulations are reproducible bit-for-bit no matter
// how work is scheduled across threads.
namespace sigmax::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash2(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

constexpr std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix64(hash2(a, b) ^ c);
}

constexpr std::uint64_t hash4(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
  return splitmix64(hash3(a, b, c) ^ d);
}

// Uniform in [0, 1) with the full 53-bit mantissa.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small sequential generator for sampling tasks (seed picks, synthesis).
// Kept platform-independent on purpose; std:: distributions are not.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGamma;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  double unit() { return to_unit(next()); }

  // Unbiased integer in [0, n) via rejection.
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sigmax::rng
