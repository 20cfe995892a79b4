// Copyright 2026 The twirl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace twirl {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seeded generator with draws implemented on top of the raw 64-bit
/// output, so results are identical across standard libraries. Streams
/// derived from the same root seed with different counters are
/// independent for practical purposes; adding a stream never perturbs
/// an existing one.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng stream(uint64_t root_seed, uint64_t counter) {
    return Rng(splitmix64(root_seed) ^ splitmix64(counter * 0xd1342543de82ef95ull + 1));
  }

  uint64_t u64() { return engine_(); }

  bool coin() { return u64() & 1u; }

  /// Uniform over {0, 1, 2} by rejection on two raw bits.
  int trit() {
    for (;;) {
      int v = static_cast<int>(u64() & 3u);
      if (v < 3) return v;
    }
  }

  /// Exact Bernoulli(3/4) from two raw bits.
  bool bernoulli_three_quarters() { return (u64() & 3u) != 3u; }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// Unbiased uniform draw from {0, ..., bound-1} by rejection.
  uint64_t below(uint64_t bound) {
    uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via Box-Muller (the sine partner is discarded to
  /// keep the draw sequence independent of call pairing).
  double gauss() {
    double u1;
    do {
      u1 = unit();
    } while (u1 <= 0.0);
    double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace twirl
