#pragma once

#include <cmath>
#include <cstdint>

namespace rropt {

// Counter-based splittable RNG. Every draw is a pure function of
// (seed, cycle, counter, round), so any cycle's random stream can be
// regenerated without replaying earlier cycles and the output is
// identical across platforms.
namespace rng {

inline constexpr std::uint64_t kGamma1 = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kGamma2 = 0xbf58476d1ce4e5b9ULL;
inline constexpr std::uint64_t kGamma3 = 0x94d049bb133111ebULL;

// SplitMix64 finalizer (full-avalanche 64-bit mix).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= kGamma2;
  z ^= z >> 27;
  z *= kGamma3;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t cycle,
                           std::uint64_t counter, std::uint64_t round = 0) {
  std::uint64_t h = mix64(seed + kGamma1);
  h = mix64(h ^ (cycle + kGamma1) * kGamma2);
  h = mix64(h ^ (counter + kGamma1) * kGamma3);
  if (round != 0) h = mix64(h ^ round * kGamma1);
  return h;
}

// Uniform double in (0,1]; 53 mantissa bits.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace rng

// One cycle's stream of draws: counter advances per draw, rejection
// rounds advance an inner round index so bounded draws stay unbiased.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::uint64_t cycle)
      : seed_(seed), cycle_(cycle) {}

  std::uint64_t next_u64() { return rng::keyed(seed_, cycle_, counter_++); }

  // Unbiased draw from {0, ..., bound-1} by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t counter = counter_++;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound) - 1;
    std::uint64_t round = 0;
    std::uint64_t x = rng::keyed(seed_, cycle_, counter, round);
    while (x > limit) x = rng::keyed(seed_, cycle_, counter, ++round);
    return x % bound;
  }

  double next_unit() { return rng::to_unit(next_u64()); }

  // Standard normal via Box-Muller (deterministic, platform-independent;
  // std::normal_distribution is implementation-defined).
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t cycle_;
  std::uint64_t counter_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace rropt
