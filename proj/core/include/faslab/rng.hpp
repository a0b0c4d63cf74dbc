#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace faslab {

// SplitMix64 output function; full-period bijective mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ull;
  return mix64(state);
}

// Deterministic sub-stream seed from a master seed and up to three tags.
// Hash-chained so that distinct (a, b, c) give statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) noexcept {
  constexpr std::uint64_t gold = 0x9e3779b97f4a7c15ull;
  std::uint64_t h = mix64(master + gold);
  h = mix64(h ^ (a + gold));
  h = mix64(h ^ (b + 2 * gold));
  h = mix64(h ^ (c + 3 * gold));
  return h;
}

// Stream tags for derive_seed; keeps Monte-Carlo noise sources decoupled.
namespace stream {
inline constexpr std::uint64_t field = 0x11;
inline constexpr std::uint64_t pilot = 0x22;
inline constexpr std::uint64_t sample = 0x33;
inline constexpr std::uint64_t coverage = 0x44;
}  // namespace stream

// xoshiro256++ with SplitMix64 state expansion. Chosen over <random> engines
// plus std::normal_distribution because distribution output is
// implementation-defined; this generator is bit-reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64_next(s);
  }

  std::uint64_t operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; explicit so the draw sequence is portable.
  double normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex normal, unit variance per real part.
  std::complex<double> normal_complex() noexcept {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace faslab
