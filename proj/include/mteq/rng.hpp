#pragma once

#include <cstdint>

namespace mteq {

/// SplitMix64 used in counter form: draw k (k = 0, 1, ...) of a stream is
/// mix64(base + (k + 1) * 0x9E3779B97F4A7C15), base = seed + stream *
/// 0xD1B54A32D192ED03. Any implementation of these two lines reproduces the
/// generated problems bit for bit.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Open interval (0, 1): ((v >> 11) + 0.5) * 2^-53.
  double uniform01();

  /// floor(uniform01-style fraction * bound) via a 64x64->128 multiply; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix64(std::uint64_t z);

private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace mteq
