#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace steinmm {

// xoshiro256** seeded through SplitMix64. Streams are derived from
// (seed, stream index) so that replication r always sees the same draws no
// matter which worker thread runs it.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0x5eed5eedULL) { reseed(seed); }

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    // Two rounds of SplitMix64 finalisation decorrelate neighbouring indices.
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    const std::uint64_t first = splitmix(s);
    const std::uint64_t second = splitmix(s);
    return Rng(first ^ (second << 1));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  // Standard normal by Box–Muller; no cached second variate, so a draw
  // consumes exactly two uniforms.
  double normal() {
    const double radius = std::sqrt(-2.0 * std::log(uniform_pos()));
    return radius * std::cos(2.0 * 3.141592653589793 * uniform());
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  void reseed(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix(s);
  }

  std::uint64_t state_[4];
};

}  // namespace steinmm
