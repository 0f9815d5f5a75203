/* Copyright 2026 The Augmentor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace augmentor {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable hash chain over a sequence of words. Used for every derived seed
/// so that outputs depend only on (root seed, indices), never on run order.
std::uint64_t hash_chain(std::initializer_list<std::uint64_t> words) noexcept;

/// Maps a raw 64-bit draw to [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential generator for samplers and pipeline decisions.
///
/// The distribution mappings are spelled out here instead of using
/// <random> distributions, whose outputs are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform() { return to_unit(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform over {0, ..., n-1}; n must be > 0. Monotone in n for a fixed draw.
  std::size_t index(std::size_t n);
  bool coin() { return uniform() < 0.5; }

 private:
  std::mt19937_64 engine_;
};

/// Counter-based per-pixel stream: draw i is a pure function of
/// (seed, image, x, y, i), so results never depend on thread scheduling.
class PixelRng {
 public:
  PixelRng(std::uint64_t seed, std::uint64_t image_index, std::uint32_t x,
           std::uint32_t y) noexcept;

  std::uint64_t next_u64() noexcept {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  }
  double uniform() noexcept { return to_unit(next_u64()); }
  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

PixelRng seeded_pixel_rng(std::uint64_t seed, std::uint64_t image_index,
                          std::uint32_t x, std::uint32_t y) noexcept;

}  // namespace augmentor
