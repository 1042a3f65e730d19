#pragma once

// Deterministic, platform-independent randomness. The engine is mt19937_64
// (bit-exact by the C++ standard); all sampling on top of it is implemented
// here rather than with std::*_distribution, whose outputs are
// implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace ratesim {

// Stream-seed derivation, documented bit-exactly:
//   z = master XOR rotl64(index, 31)
//   z += 0x9E3779B97F4A7C15
//   z = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z XOR (z >> 27)) * 0x94D049BB133111EB
//   derived = z XOR (z >> 31)
// The mix is a bijection of (master XOR rotl64(index, 31)), so for a fixed
// master, distinct indices always yield distinct seeds.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master ^ ((index << 31) | (index >> 33));
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream tags keep codebook draws and per-trial noise on disjoint seed
// indices: index = (tag << 56) | counter.
enum class StreamTag : std::uint64_t { kCodebook = 1, kTrial = 2, kAux = 3 };

inline std::uint64_t stream_index(StreamTag tag, std::uint64_t counter) {
  return (static_cast<std::uint64_t>(tag) << 56) | counter;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform double in [0,1) with 53 random bits.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n) by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) {
      next_u64();  // consume one draw regardless, keeping streams aligned
      return 0;
    }
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      std::uint64_t v = next_u64();
      if (v < limit) return v % n;
    }
  }

  // Inverse-CDF sample from a pmf given as consecutive probabilities.
  int sample(std::span<const double> pmf) {
    double u = next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      acc += pmf[i];
      if (u < acc) return static_cast<int>(i);
    }
    // Guard against rounding at u ~ 1: return the last positive symbol.
    for (std::size_t i = pmf.size(); i-- > 0;) {
      if (pmf[i] > 0.0) return static_cast<int>(i);
    }
    return 0;
  }

  // Standard normal via Box-Muller (used only for sampling directions).
  double next_gaussian() {
    double u1 = next_unit(), u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ratesim
