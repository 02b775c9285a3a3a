// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Reproducible random streams.
//
// Every stream is a pure function of (master_seed, stream_index): the pair is
// hashed through splitmix64 into the 256-bit state of a xoshiro256** engine.
// Parallel work is split into fixed blocks, each block owning one stream, so
// results do not depend on how many workers process the blocks.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace lgc {

struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += UINT64_C(0x9E3779B97F4A7C15));
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngSeed seed) {
    std::uint64_t a = seed.master_seed;
    std::uint64_t mixed = splitmix64_next(a);
    std::uint64_t b = seed.stream_index ^ UINT64_C(0xD1B54A32D192ED03);
    mixed ^= splitmix64_next(b) * UINT64_C(0xAEF17502108EF2D9);
    for (auto& word : s_) word = splitmix64_next(mixed);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t draw;
    do {
      draw = (*this)();
    } while (draw >= limit);
    return draw % bound;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lgc
