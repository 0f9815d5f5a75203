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

#include "augmentor/error.hpp"
#include "augmentor/rle.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace augmentor;

TEST_CASE("round trip on random masks") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 1 + static_cast<int>(gen() % 40), h = 1 + static_cast<int>(gen() % 30);
    BinaryMask m(w, h, 0);
    const unsigned density = gen() % 4;
    std::uint64_t area = 0;
    for (auto& v : m.pixels()) {
      v = (gen() % 4) < density ? 1 : 0;
      area += v;
    }
    const RleMask rle = RleMask::encode(m);
    REQUIRE(rle.decode() == m);
    REQUIRE(rle.area() == area);
    REQUIRE(rle_from_json(to_json(rle)) == rle);
  }
}

TEST_CASE("counts start with the background run") {
  BinaryMask m(4, 1, 1);
  const RleMask rle = RleMask::encode(m);
  CHECK(rle.counts == std::vector<std::uint32_t>{0, 4});
  BinaryMask z(3, 2, 0);
  CHECK(RleMask::encode(z).counts == std::vector<std::uint32_t>{6});
  // Row-major traversal.
  BinaryMask col(2, 2, 0);
  col(0, 1) = 1;
  CHECK(RleMask::encode(col).counts == std::vector<std::uint32_t>{2, 1, 1});
}

TEST_CASE("tight bounding box") {
  CHECK(tight_bbox(fixtures::rect_mask(20, 10, 3, 2, 5, 4)) == PixelRect{3, 2, 5, 4});
  CHECK(tight_bbox(BinaryMask(5, 5, 0)) == PixelRect{});
  BinaryMask two(10, 10, 0);
  two(1, 8) = 1;
  two(7, 2) = 1;
  CHECK(tight_bbox(two) == PixelRect{1, 2, 7, 7});
}

TEST_CASE("malformed run lists are rejected") {
  nlohmann::json j{{"size", {2, 2}}, {"counts", {1, 1}}};
  CHECK_THROWS_AS(rle_from_json(j), Error);
  j["counts"] = {3, 3};
  CHECK_THROWS_AS(rle_from_json(j), Error);
}
