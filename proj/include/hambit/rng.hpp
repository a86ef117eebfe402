#pragma once

#include <cmath>
#include <cstdint>

namespace hambit {

// splitmix64 step (Vigna). Used both as the stream generator and as the
// mixing function that derives independent per-path substream keys, so
// sampling is reproducible under any path-parallel schedule.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for the substream identified by (seed, purpose, index).
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t purpose,
                                   std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (purpose * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0xda942042e4dd58b5ULL + 1);
  return splitmix64(s);
}

namespace stream {
inline constexpr std::uint64_t noise = 0x4c45565959ULL;      // driving Levy noise
inline constexpr std::uint64_t volatility = 0x5349474d41ULL; // volatility paths
}  // namespace stream

// Deterministic counter-style generator. Gaussians via Box-Muller so the
// draw sequence does not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform on (0, 1].
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Poisson count by sequential search; intended for small means.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    double l = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hambit
