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

#include "augmentor/rng.hpp"

#include <algorithm>

namespace augmentor {

std::uint64_t hash_chain(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

std::size_t Rng::index(std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

PixelRng::PixelRng(std::uint64_t seed, std::uint64_t image_index,
                   std::uint32_t x, std::uint32_t y) noexcept
    : key_(hash_chain({seed, image_index,
                       (static_cast<std::uint64_t>(y) << 32) | x})) {}

PixelRng seeded_pixel_rng(std::uint64_t seed, std::uint64_t image_index,
                          std::uint32_t x, std::uint32_t y) noexcept {
  return PixelRng(seed, image_index, x, y);
}

}  // namespace augmentor
