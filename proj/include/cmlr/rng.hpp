#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace cmlr {

/// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9e3779b97f4a7c15, then a
/// fixed xor-shift-multiply finalizer. Every draw below is defined in terms of
/// this stream with explicit formulas, so datasets are identical on every
/// platform and compiler.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second variate is discarded so each
  /// call consumes exactly two words.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Seed for a sub-stream identified by `path`, e.g. (seed, class, index).
/// Each component is folded in with a SplitMix64 step, so distinct paths give
/// unrelated streams regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = SplitMix64(base)();
  for (std::uint64_t part : path) h = SplitMix64(h ^ (part * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL))();
  return h;
}

}  // namespace cmlr
