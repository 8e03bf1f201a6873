// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Small splittable RNG (xoshiro256++) with reproducible output.

  The standard <random> distributions are implementation-defined, so results
  would differ across standard libraries. Simulation oracles must be
  reproducible byte-for-byte for a fixed seed, hence this self-contained
  generator plus explicit samplers built only on uniform01().
*/

#pragma once

#include <cstdint>

namespace gg1 {

/// SplitMix64 stream, used to expand a single 64-bit seed into generator
/// state (recommended seeding procedure for the xoshiro family).
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256++ 1.0: 256-bit state, jumpable; here we derive independent
/// shard streams by seeding SplitMix64 with (seed, shard) instead of jumping.
struct Xoshiro256pp {
  std::uint64_t s[4] = {1, 2, 3, 4};

  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s) word = sm.next();
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace gg1
