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

#include "augmentor/config.hpp"
#include "augmentor/error.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <set>

using namespace augmentor;
using json = nlohmann::json;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    load_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error for " << text);
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("an empty object yields the defaults") {
  const AugmentationConfig c = load_config("{}");
  CHECK(c.augmentations_per_image == 20);
  CHECK(c.max_cars == 5);
  CHECK(c.cars_mode == CarsMode::uniform);
  CHECK(c.placement_strategy == PlacementStrategy::manual);
  CHECK(c.env_mode == EnvMode::true_map);
  CHECK(c.background_mode == BackgroundMode::real);
  CHECK(c.render.samples_per_pixel == 4);
  CHECK(c.render.diffuse_env_samples == 64);
  CHECK(c.postfx.enabled);
  CHECK(c.postfx.gamma == 1.05);
  CHECK(c.seed == 0);
}

TEST_CASE("fields are read and relative paths resolve against the base directory") {
  const AugmentationConfig c = load_config(R"({
    "augmentations_per_image": 3, "max_cars": 2, "cars_mode": "exact",
    "placement_strategy": "ground_plane",
    "placement_region": {"min_x": -2, "max_x": 2, "min_z": 5, "max_z": 9, "max_count": 4},
    "unconstrained_volume": {"min": [-1, -1, 5], "max": [1, 1, 7]},
    "env_mode": "none", "background_mode": "black", "seed": 18446744073709551615,
    "postfx": {"enabled": false, "gamma": 2.0, "color_curve": [[0, 0], [0.5, 0.4], [1, 1]]},
    "render": {"samples_per_pixel": 1, "diffuse_env_samples": 2, "shadow_samples": 3,
               "enable_shadows": false, "max_shadow": 0.3},
    "catalog": "cat.json", "output_dir": "/abs/out"
  })", "/base");
  CHECK(c.augmentations_per_image == 3);
  CHECK(c.max_cars == 2);
  CHECK(c.cars_mode == CarsMode::exact);
  CHECK(c.placement_strategy == PlacementStrategy::ground_plane);
  CHECK(c.placement_region.max_count == 4);
  CHECK(c.unconstrained_volume.max.z() == 7);
  CHECK(c.env_mode == EnvMode::none);
  CHECK(c.background_mode == BackgroundMode::black);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK_FALSE(c.postfx.enabled);
  CHECK(c.postfx.color_curve(0.5) == doctest::Approx(0.4));
  CHECK(c.render.shadow_samples == 3);
  CHECK(c.render.max_shadow == 0.3);
  CHECK(c.catalog == std::filesystem::path("/base/cat.json"));
  CHECK(c.output_dir == std::filesystem::path("/abs/out"));
}

TEST_CASE("out-of-range values are rejected") {
  CHECK(code_of(R"({"augmentations_per_image": 0})") == ErrorCode::RangeViolation);
  CHECK(code_of(R"({"max_cars": -1})") == ErrorCode::RangeViolation);
  CHECK(code_of(R"({"render": {"samples_per_pixel": 0}})") == ErrorCode::RangeViolation);
  CHECK(code_of(R"({"postfx": {"dof_strength": -1}})") == ErrorCode::RangeViolation);
  CHECK(code_of(R"({"placement_strategy": "teleport"})") == ErrorCode::RangeViolation);
  CHECK(code_of(R"({"placement_region": {"min_x": 3, "max_x": 1}})") == ErrorCode::RangeViolation);
}

TEST_CASE("unknown keys are rejected at any depth") {
  CHECK(code_of(R"({"blur": 1})") == ErrorCode::UnknownKey);
  CHECK(code_of(R"({"postfx": {"blur": 1}})") == ErrorCode::UnknownKey);
  CHECK(code_of(R"({"render": {"spp": 4}})") == ErrorCode::UnknownKey);
}

TEST_CASE("syntax errors carry the line number") {
  try {
    load_config("{\n  \"max_cars\": 3,\n  \"seed\": ,\n}", {}, "cfg.json");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("cfg.json:3") != std::string::npos);
  }
  CHECK(code_of(R"({"max_cars": "many"})") == ErrorCode::ParseError);
  CHECK(code_of("[1, 2]") == ErrorCode::ParseError);
}

TEST_CASE("canonical JSON round trips") {
  const AugmentationConfig c = load_config(R"({"max_cars": 4, "env_mode": "random_map", "seed": 9})");
  const AugmentationConfig back = load_config(config_to_json(c).dump());
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("fingerprint follows every field except the output directory") {
  const AugmentationConfig base = load_config("{}");
  const std::string fp = config_fingerprint(base);
  CHECK(fp.size() == 64);
  CHECK(config_fingerprint(load_config("{}")) == fp);
  AugmentationConfig moved = base;
  moved.output_dir = "elsewhere";
  CHECK(config_fingerprint(moved) == fp);

  const std::vector<std::string> tweaks{
      R"({"augmentations_per_image": 21})", R"({"max_cars": 4})", R"({"cars_mode": "exact"})",
      R"({"placement_strategy": "road_mask"})", R"({"placement_region": {"max_count": 3}})",
      R"({"unconstrained_volume": {"min": [-8, -2, 5], "max": [8, 2, 60]}})",
      R"({"env_mode": "none"})", R"({"env_gamma_decode": false})", R"({"background_mode": "black"})",
      R"({"postfx": {"gamma": 1.1}})", R"({"postfx": {"chroma_shift": 0.5}})",
      R"({"render": {"shadow_samples": 31}})", R"({"seed": 1})", R"({"catalog": "x.json"})"};
  std::set<std::string> seen{fp};
  for (const std::string& t : tweaks) {
    const std::string f = config_fingerprint(load_config(t));
    CHECK_MESSAGE(seen.insert(f).second, t);
  }
}

TEST_CASE("pools expand directories into sorted image files") {
  fixtures::TempDir dir;
  std::filesystem::create_directories(dir / "envs");
  for (const char* name : {"b.png", "a.pfm", "c.txt", "d.png"}) fixtures::write_text(dir / "envs" / name, "x");
  fixtures::write_text(dir / "single.png", "x");
  const std::vector<std::filesystem::path> entries{dir / "envs", dir / "single.png"};
  const auto out = expand_pool(entries);
  REQUIRE(out.size() == 4);
  CHECK(out[0].filename() == "a.pfm");
  CHECK(out[1].filename() == "b.png");
  CHECK(out[2].filename() == "d.png");
  CHECK(out[3].filename() == "single.png");
}

TEST_CASE("config files report missing files as IO errors") {
  try {
    load_config_file("/nonexistent/config.json");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}
