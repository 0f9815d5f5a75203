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

#include "augmentor/geometry.hpp"
#include "augmentor/placement.hpp"
#include "augmentor/rig.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace augmentor {

/// Default annotation window: 40 m wide, 60 m deep, starting 4 m ahead.
inline constexpr GroundRect kDefaultBirdseyeExtent{-20.0, 20.0, 4.0, 64.0};
inline constexpr double kDefaultMetersPerPixel = 0.1;

/// Sidecar for an exported birdseye image. Pixel (col, row) shows ground
/// point (min_x + col * mpp, min_z + row * mpp).
struct BirdseyeMeta {
  std::string rig_id;
  std::string image;
  double meters_per_pixel = kDefaultMetersPerPixel;
  GroundRect extent = kDefaultBirdseyeExtent;
  int width = 0;
  int height = 0;

  Vec2 pixel_to_ground(const Vec2& pixel) const;
  Vec2 ground_to_pixel(const Vec2& ground) const;
};

/// {"rig_id", "image", "meters_per_pixel", "extent": {"min_x", "max_x", "min_z", "max_z"},
///  "origin": [min_x, min_z], "size": [w, h]}
nlohmann::json birdseye_meta_to_json(const BirdseyeMeta& meta);
/// Throws ParseError on a malformed sidecar, RangeViolation when the size
/// disagrees with extent / scale.
BirdseyeMeta birdseye_meta_from_json(const nlohmann::json& j);

/// Warps the rig image and writes `<rig id>_birdseye.png` plus
/// `<rig id>_birdseye.json` into `out_dir`.
BirdseyeMeta export_birdseye(const CameraRig& rig, double meters_per_pixel, const GroundRect& extent,
                             const std::filesystem::path& out_dir);

/// Converts polylines drawn in birdseye pixels to a TrajectorySet in meters.
TrajectorySet trajectories_from_pixels(const BirdseyeMeta& meta,
                                       const std::vector<std::vector<Vec2>>& pixel_polylines);

/// TrajectorySet JSON as read by parse_trajectories.
nlohmann::json trajectories_to_json(const TrajectorySet& set, const BirdseyeMeta& meta);

}  // namespace augmentor
