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

#include "augmentor/rle.hpp"

#include "augmentor/error.hpp"

#include <algorithm>

namespace augmentor {

RleMask RleMask::encode(const BinaryMask& mask) {
  RleMask rle;
  rle.width = mask.width();
  rle.height = mask.height();
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::uint8_t v : mask.pixels()) {
    const std::uint8_t bit = v != 0 ? 1 : 0;
    if (bit != current) {
      rle.counts.push_back(run);
      run = 0;
      current = bit;
    }
    ++run;
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryMask RleMask::decode() const {
  BinaryMask mask(width, height, 0);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t run : counts) {
    if (pos + run > mask.size()) throw Error(ErrorCode::InvalidArgument, "RLE runs exceed mask size");
    std::fill_n(mask.pixels().begin() + static_cast<std::ptrdiff_t>(pos), run, value);
    pos += run;
    value ^= 1;
  }
  if (pos != mask.size()) throw Error(ErrorCode::InvalidArgument, "RLE runs do not cover the mask");
  return mask;
}

std::uint64_t RleMask::area() const noexcept {
  std::uint64_t total = 0;
  for (std::size_t i = 1; i < counts.size(); i += 2) total += counts[i];
  return total;
}

nlohmann::json to_json(const RleMask& rle) {
  return nlohmann::json{{"size", {rle.width, rle.height}}, {"counts", rle.counts}};
}

RleMask rle_from_json(const nlohmann::json& j) {
  RleMask rle;
  rle.width = j.at("size").at(0).get<int>();
  rle.height = j.at("size").at(1).get<int>();
  rle.counts = j.at("counts").get<std::vector<std::uint32_t>>();
  rle.decode();  // validates run coverage
  return rle;
}

PixelRect tight_bbox(const BinaryMask& mask) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return {};
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace augmentor
