#include "mteq/rng.hpp"

namespace mteq {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamStride = 0xD1B54A32D192ED03ULL;
}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(seed + stream * kStreamStride) {}

std::uint64_t CounterRng::mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(base_ + counter_ * kGamma);
}

double CounterRng::uniform01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  __extension__ using u128 = unsigned __int128;
  const u128 prod = static_cast<u128>(next_u64()) * bound;
  return static_cast<std::uint64_t>(prod >> 64);
}

}  // namespace mteq
