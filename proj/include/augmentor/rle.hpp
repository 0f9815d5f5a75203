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

#include "augmentor/image.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace augmentor {

using BinaryMask = Raster<std::uint8_t>;

/// Row-major run lengths alternating zero/one runs, starting with a
/// (possibly empty) zero run.
struct RleMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> counts;

  static RleMask encode(const BinaryMask& mask);
  BinaryMask decode() const;
  std::uint64_t area() const noexcept;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

/// {"size": [w, h], "counts": [...]}
nlohmann::json to_json(const RleMask& rle);
RleMask rle_from_json(const nlohmann::json& j);

struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Tight bounds of the nonzero pixels; zero-size rect for an empty mask.
PixelRect tight_bbox(const BinaryMask& mask);

}  // namespace augmentor
