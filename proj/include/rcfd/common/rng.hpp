// Portable seeded random source.
//
// The standard engines are fully specified, the standard distributions are
// not. Every draw used by the library goes through the helpers below so that
// a seed produces the same sequence on every platform and toolchain.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rcfd {

/// One step of splitmix64, used to derive independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combines a base seed with a stream label into a new seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t label) noexcept
{
  return splitmix64(splitmix64(base) ^ splitmix64(label + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n)
  {
    if (n <= 1) {
      return 0;
    }
    const std::uint64_t limit = max() - (max() % n);
    std::uint64_t x = engine_();
    while (x >= limit) {
      x = engine_();
    }
    return x % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential variate with the given mean.
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

private:
  std::mt19937_64 engine_;
};

} // namespace rcfd
