#pragma once

#include <array>
#include <cstdint>

namespace dahaze {

// splitmix64 finaliser applied to a single value. Used both to expand seeds
// into generator state and to derive per-replica sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Sub-seed for replica / stream k of a run seeded with `seed`.
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t k) noexcept {
  return splitmix64(seed ^ k);
}

/// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed with a
/// running splitmix64 sequence. Every draw is defined on integers only, so
/// streams are identical on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;

  // Uniform integer in [0, bound). bound must be > 0. Rejection sampling
  // keeps the draw exactly uniform.
  std::uint64_t below(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace dahaze
