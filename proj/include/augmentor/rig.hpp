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

#include "augmentor/renderer.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace augmentor {

struct CameraRig {
  std::string id;
  std::filesystem::path image;
  CameraCalibration calibration;
  std::optional<std::filesystem::path> env_map;
  std::optional<std::filesystem::path> trajectories;
  std::optional<std::filesystem::path> road_mask;
  std::optional<std::filesystem::path> annotations;
};

/// {"focal": [fx, fy], "center": [cx, cy], "size": [w, h],
///  "plane": {"normal": [nx, ny, nz], "offset": r}}
CameraCalibration parse_calibration(const nlohmann::json& j);
CameraCalibration load_calibration(const std::filesystem::path& path);
nlohmann::json calibration_to_json(const CameraCalibration& calibration);

/// JSON array of rigs. Each entry: {"id"?, "image", "calibration" (path or
/// inline object), "env_map"?, "trajectories"?, "road_mask"?, "annotations"?}.
/// Paths resolve against `base_dir`; every referenced file must exist.
std::vector<CameraRig> parse_rigs(const nlohmann::json& j, const std::filesystem::path& base_dir);
std::vector<CameraRig> load_rigs(const std::filesystem::path& path);
nlohmann::json rigs_to_json(const std::vector<CameraRig>& rigs);

}  // namespace augmentor
