#pragma once

// Counter-based randomness. Every value is a pure function of
// (key, counter), so streams are reproducible across platforms and
// independent of draw interleaving between agents.

#include <cmath>
#include <cstdint>

namespace relcoin {

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept { return mix64(mix64(key_) ^ mix64(counter_++ ^ kStream)); }

  constexpr bool bit() noexcept { return ((*this)() >> 63) != 0; }

  // Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // True with probability p; p <= 0 never, p >= 1 always.
  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  // Unbiased integer in [0, bound) by rejection; bound must be nonzero.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // Rejection range is the largest multiple of bound representable.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % bound;
  }

  constexpr std::uint64_t draws() const noexcept { return counter_; }
  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  static constexpr std::uint64_t kStream = 0x6a09e667f3bcc909ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Seed for the i-th independent trial under a root seed.
constexpr std::uint64_t derive_trial_seed(std::uint64_t root_seed, std::uint64_t trial) noexcept {
  return mix64(mix64(root_seed ^ 0x3c6ef372fe94f82bULL) + mix64(trial));
}

}  // namespace relcoin
