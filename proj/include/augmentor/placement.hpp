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

#include "augmentor/assets.hpp"
#include "augmentor/geometry.hpp"
#include "augmentor/rng.hpp"

#include <Eigen/Geometry>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace augmentor {

enum class PoseKind { on_plane, free };

struct PoseSample {
  PoseKind kind = PoseKind::on_plane;
  Vec3 position = Vec3::Zero();
  /// Radians in [0, 2pi) about the plane normal; on_plane only.
  double yaw = 0.0;
  /// free only.
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  static PoseSample on_plane(const GroundPlane& plane, const Vec2& ground, double yaw);
  static PoseSample free(const Vec3& position, const Eigen::Quaterniond& rotation);
};

/// Model-to-camera rigid map: world = linear * model + translation.
struct RigidTransform {
  Mat3 linear = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return linear * p + translation; }
};

/// Model frame (y up) to camera frame (y down) for a pose. On-plane poses
/// stand the model on the plane with its up axis along the plane normal.
RigidTransform pose_transform(const PoseSample& pose, const GroundPlane& plane);

/// Wraps an angle into [0, 2pi).
double wrap_angle(double radians);

struct TrajectorySet {
  std::vector<std::vector<Vec2>> polylines;
  std::string source;

  void validate() const;
};

struct PlacementRegion {
  double min_x = -8.0;
  double max_x = 8.0;
  double min_z = 4.0;
  double max_z = 60.0;
  int max_count = 100;

  void validate() const;
};

struct VolumeBounds {
  Vec3 min{-8.0, -2.0, 4.0};
  Vec3 max{8.0, 2.0, 60.0};

  void validate() const;
};

/// Trajectory JSON: {"meters_per_pixel": r, "extent": {...}, "polylines": [[[x,z],...],...]}.
TrajectorySet parse_trajectories(std::string_view json_text, std::string source = {});
TrajectorySet load_trajectories(const std::filesystem::path& path);

std::vector<PoseSample> sample_manual(const TrajectorySet& traj, const GroundPlane& plane,
                                      int count, Rng& rng);
std::vector<PoseSample> sample_road_mask(const ImageGray8& mask, const CameraIntrinsics& k,
                                         const GroundPlane& plane, int count, Rng& rng);
std::vector<PoseSample> sample_ground_plane(const PlacementRegion& region,
                                            const GroundPlane& plane, int count, Rng& rng);
std::vector<PoseSample> sample_unconstrained(const VolumeBounds& bounds, int count, Rng& rng);

/// Greedy, in input order: an on-plane pose is dropped when its footprint
/// overlaps any footprint kept before it. Free poses always pass.
/// Returns the indices of kept poses.
std::vector<std::size_t> collision_free_indices(std::span<const PoseSample> poses,
                                                std::span<const CarModel* const> models,
                                                const GroundPlane& plane);

std::vector<PoseSample> filter_collisions(std::span<const PoseSample> poses,
                                          std::span<const CarModel* const> models,
                                          const GroundPlane& plane);

}  // namespace augmentor
