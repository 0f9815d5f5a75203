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

#include "augmentor/birdseye.hpp"
#include "augmentor/error.hpp"
#include "augmentor/placement.hpp"
#include "augmentor/rig.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace augmentor;
using json = nlohmann::json;

TEST_CASE("default extent at 0.1 m per pixel is 400 x 600") {
  const auto size = birdseye_size(kDefaultBirdseyeExtent, kDefaultMetersPerPixel);
  CHECK(size[0] == 400);
  CHECK(size[1] == 600);
}

TEST_CASE("pixel and ground coordinates round trip") {
  BirdseyeMeta m;
  m.width = 400;
  m.height = 600;
  CHECK(m.pixel_to_ground(Vec2(0, 0)).isApprox(Vec2(-20, 4)));
  CHECK(m.pixel_to_ground(Vec2(400, 600)).isApprox(Vec2(20, 64)));
  CHECK(m.ground_to_pixel(Vec2(0, 34)).isApprox(Vec2(200, 300)));
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> ux(0, 400), uy(0, 600);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p(ux(gen), uy(gen));
    REQUIRE((m.ground_to_pixel(m.pixel_to_ground(p)) - p).norm() < 1e-9);
  }
}

TEST_CASE("export writes the image and metadata") {
  fixtures::TempDir dir;
  const auto d = fixtures::make_dataset(dir.path(), {});
  const auto rigs = load_rigs(d.rigs);
  const GroundRect extent{-4, 4, 5, 13};
  const BirdseyeMeta meta = export_birdseye(rigs[0], 0.05, extent, dir / "bev");
  CHECK(meta.width == 160);
  CHECK(meta.height == 160);
  const ImageRgb8 img = read_rgb8(dir / "bev" / "rig0_birdseye.png");
  CHECK(img.same_shape(160, 160));
  const json j = json::parse(fixtures::slurp(dir / "bev" / "rig0_birdseye.json"));
  CHECK(j.at("rig_id") == "rig0");
  CHECK(j.at("image") == "rig0_birdseye.png");
  CHECK(j.at("origin") == json::array({-4.0, 5.0}));
  const BirdseyeMeta back = birdseye_meta_from_json(j);
  CHECK(back.width == 160);
  CHECK(back.extent.max_z == 13.0);
  json bad = j;
  bad["size"] = {10, 10};
  CHECK_THROWS_AS(birdseye_meta_from_json(bad), Error);
  bad = j;
  bad.erase("extent");
  CHECK_THROWS_AS(birdseye_meta_from_json(bad), Error);

  CameraRig wrong = rigs[0];
  wrong.calibration.intrinsics.width = 100;
  CHECK_THROWS_AS(export_birdseye(wrong, 0.05, extent, dir / "bev2"), Error);
}

TEST_CASE("pixel polylines become trajectories the placement sampler accepts") {
  BirdseyeMeta meta;
  meta.rig_id = "rig0";
  meta.width = 400;
  meta.height = 600;
  const std::vector<std::vector<Vec2>> px{{Vec2(182, 40), Vec2(182, 300)}, {Vec2(222, 50), Vec2(226, 400)}};
  const TrajectorySet set = trajectories_from_pixels(meta, px);
  REQUIRE(set.polylines.size() == 2);
  CHECK(set.polylines[0][0].isApprox(Vec2(-1.8, 8.0)));
  const std::string text = trajectories_to_json(set, meta).dump();
  const TrajectorySet parsed = parse_trajectories(text, "bev");
  CHECK(parsed.polylines == set.polylines);
  Rng rng(5);
  const auto poses = sample_manual(parsed, GroundPlane::from_height(1.6), 50, rng);
  CHECK(poses.size() == 50);
  for (const PoseSample& p : poses) {
    CHECK(p.position.z() >= 8.0 - 1e-9);
    CHECK(p.position.z() <= 44.0 + 1e-9);
  }
  CHECK_THROWS_AS(trajectories_from_pixels(meta, {{Vec2(1, 1)}}), Error);
}
