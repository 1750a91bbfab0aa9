// Copyright 2026 The mdl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace mdl {

/// SplitMix64 finalizer (Stafford's Mix13 variant, as used in Java's
/// SplittableRandom and Vigna's public-domain splitmix64.c). Bijective on
/// 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64 pseudorandom generator. Counter-based: the state advances by
/// the golden-ratio increment and each output is mix64 of the counter, so the
/// whole output sequence is a pure function of the seed, identical on every
/// platform and thread schedule.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    return mix64(state_ += 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1), 53 random mantissa bits.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  constexpr double next_unit_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  constexpr bool next_bernoulli(double p) noexcept { return next_unit() < p; }

 private:
  std::uint64_t state_;
};

/// Addressing for independent random streams. Every (master_seed,
/// trial_index, round_index) triple maps to its own stream, so parallel
/// trials never need to coordinate generator state.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint32_t trial_index = 0;
  std::uint32_t round_index = 0;
};

/// round_index reserved for drawing initial opinions, distinct from every
/// graph round.
inline constexpr std::uint32_t kOpinionStreamRound = 0xFFFFFFFFu;

/// Derives the stream for a seed path by chaining mix64 over the triple.
/// Pure function: same triple -> same stream everywhere. Distinct triples
/// collide only with negligible (hash-collision) probability.
constexpr SplitMix64 derive_stream(const SeedPath& path) noexcept {
  std::uint64_t h = mix64(path.master_seed ^ 0x9E3779B97F4A7C15ULL);
  h = mix64(h + 0xBF58476D1CE4E5B9ULL * (std::uint64_t{path.trial_index} + 1));
  h = mix64(h + 0x94D049BB133111EBULL * (std::uint64_t{path.round_index} + 1));
  return SplitMix64{h};
}

/// Folds a config fingerprint into a master seed so that sweep entries with
/// different configurations draw unrelated streams.
constexpr std::uint64_t mix_master_seed(std::uint64_t master_seed,
                                        std::uint64_t fingerprint) noexcept {
  return mix64(master_seed ^ mix64(fingerprint ^ 0x94D049BB133111EBULL));
}

}  // namespace mdl
