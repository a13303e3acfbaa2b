#pragma once

#include <cstdint>
#include <limits>

namespace disclab {

/// Counter-based 64-bit generator. Output i of stream (seed, s) is a fixed
/// hash of (seed, s, i), so replication r can use stream (seed, r) and get
/// the same numbers whether it runs first, last, or on another thread.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  result_type operator()() noexcept;
  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t position() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t outer_key_;
  std::uint64_t inner_key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : outer_key_(mix64(seed + kGolden)),
      inner_key_(mix64(outer_key_ ^ mix64(stream + 2 * kGolden))) {}

inline CounterRng::result_type CounterRng::operator()() noexcept {
  const std::uint64_t i = counter_++;
  return mix64(mix64(i * kGolden + inner_key_) ^ outer_key_);
}

}  // namespace disclab
