#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ostoc {

// Seedable 64-bit generator used everywhere randomness is needed.
// Core engine is std::mt19937_64 (fully specified by the standard, so
// sequences are identical across platforms); all derived samples below
// are computed from raw engine output without going through the
// implementation-defined <random> distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit mantissa.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform in {0, ..., n-1}, unbiased via rejection.
  int uniform_int(int n) {
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t rem = (UINT64_MAX % un + 1) % un;  // 2^64 mod n
    const uint64_t limit = UINT64_MAX - rem;
    uint64_t x;
    do {
      x = gen_();
    } while (x > limit);
    return static_cast<int>(x % un);
  }

  // Standard normal via Box-Muller on engine output.
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // In-place Fisher-Yates shuffle of indices 0..n-1 stored in `perm`.
  void shuffle(std::vector<int>& perm) {
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) {
      const int j = uniform_int(i + 1);
      std::swap(perm[i], perm[static_cast<size_t>(j)]);
    }
  }

  // Independent sub-stream derived from this generator's seed and a tag.
  Rng fork(uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag))); }

  uint64_t seed() const { return seed_; }

  static uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace ostoc
