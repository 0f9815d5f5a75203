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

#include "augmentor/compositor.hpp"
#include "augmentor/envmap.hpp"
#include "augmentor/placement.hpp"
#include "augmentor/postfx.hpp"
#include "augmentor/renderer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace augmentor {

enum class PlacementStrategy { manual, road_mask, ground_plane, unconstrained };
enum class CarsMode { uniform, exact };

struct AugmentationConfig {
  int augmentations_per_image = 20;
  int max_cars = 5;
  CarsMode cars_mode = CarsMode::uniform;
  PlacementStrategy placement_strategy = PlacementStrategy::manual;
  PlacementRegion placement_region;
  VolumeBounds unconstrained_volume;
  EnvMode env_mode = EnvMode::true_map;
  /// Files or directories; directories expand to their image files.
  std::vector<std::filesystem::path> env_pool;
  bool env_gamma_decode = true;
  BackgroundMode background_mode = BackgroundMode::real;
  std::vector<std::filesystem::path> background_pool;
  PostFxParams postfx;
  RenderSettings render;
  std::uint64_t seed = 0;
  std::filesystem::path catalog;
  std::filesystem::path output_dir = "augmented";

  void validate() const;
};

/// Strict parse: unknown keys are rejected at every level and omitted keys
/// take their defaults. Relative paths resolve against `base_dir`.
AugmentationConfig load_config(std::string_view text, const std::filesystem::path& base_dir = {},
                               const std::string& source = "<config>");
AugmentationConfig load_config_file(const std::filesystem::path& path);

/// Fully resolved config (defaults included) as canonical JSON.
nlohmann::json config_to_json(const AugmentationConfig& config);

/// SHA-256 (hex) over the semantically meaningful config fields; the output
/// directory is excluded.
std::string config_fingerprint(const AugmentationConfig& config);

std::string_view to_string(PlacementStrategy s);
std::string_view to_string(EnvMode m);
std::string_view to_string(CarsMode m);

/// Expands directory entries to their sorted .png/.pfm files.
std::vector<std::filesystem::path> expand_pool(std::span<const std::filesystem::path> entries);

}  // namespace augmentor
