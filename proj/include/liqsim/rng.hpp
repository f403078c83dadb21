#pragma once

#include <cstdint>
#include <string_view>

namespace liqsim::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output function (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Counter-based stream: draw i depends only on (seed, name, i), so
/// different consumers never perturb each other and ranges of a stream can
/// be evaluated in any order or in parallel. Draw i equals the (i+1)-th
/// SplitMix64 output from the derived key.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::string_view name)
      : key_(mix64(seed ^ mix64(fnv1a(name)))) {}

  constexpr std::uint64_t bits_at(std::uint64_t counter) const {
    return mix64(key_ + (counter + 1) * kGoldenGamma);
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  constexpr double uniform_at(std::uint64_t counter) const {
    return (static_cast<double>(bits_at(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by inverse transform of uniform_at.
  double normal_at(std::uint64_t counter) const;

  double next_uniform() { return uniform_at(counter_++); }
  double next_normal() { return normal_at(counter_++); }

  std::uint64_t position() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace liqsim::rng
