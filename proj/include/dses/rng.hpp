// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace dses {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based deterministic random stream. Every draw is a pure function of
// (seed, stream id, draw counter), so ensembles reproduce bit-identically
// regardless of evaluation order or thread count. Stream ids 0..2^63-1 are for
// trajectories; the top id is reserved for the master stream that resolves
// shared initial conditions.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : base_(mix64(mix64(seed) ^ stream_id)) {}

  static RandomStream master(std::uint64_t seed) noexcept {
    return RandomStream(seed, 0xFFFFFFFFFFFFFFFFULL);
  }

  std::uint64_t next_u64() noexcept {
    return mix64(base_ + 0x9e3779b97f4a7c15ULL * counter_++);
  }

  // uniform on [0,1) with 53 random bits
  double uniform01() noexcept { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // symmetric two-point draw on {-1,+1}
  double rademacher() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace dses
