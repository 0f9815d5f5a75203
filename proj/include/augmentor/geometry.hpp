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

#include <Eigen/Core>

#include <array>

namespace augmentor {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Pinhole intrinsics. Pixel centers sit at integer coordinates, so the
/// principal point is expressed in the same frame as `project` output.
struct CameraIntrinsics {
  double focal_x = 1.0;
  double focal_y = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  int width = 1;
  int height = 1;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
  Mat3 matrix() const;
};

/// Plane {p : normal . p = offset} in camera coordinates (x right, y down,
/// z forward, meters). The normal points from the ground toward the camera.
struct GroundPlane {
  Vec3 normal{0.0, -1.0, 0.0};
  double offset = -1.0;

  /// Canonical flat road for a camera mounted `height` meters above it.
  static GroundPlane from_height(double height);

  void validate() const;
  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }

  /// Orthonormal in-plane axes (x_axis, z_axis) and the foot of the camera on
  /// the plane. For the canonical plane these are +x, +z and (0, h, 0).
  Vec3 x_axis() const;
  Vec3 z_axis() const;
  Vec3 origin() const { return offset * normal; }

  /// Ground-plane 2D coordinates (x, z) <-> camera-frame 3D points.
  Vec3 lift(const Vec2& ground) const;
  Vec2 plane_coords(const Vec3& p) const;
};

/// Maps ground-plane meters (x, z, 1) to homogeneous image pixels.
class Homography {
 public:
  Homography() = default;
  explicit Homography(const Mat3& m);

  const Mat3& matrix() const noexcept { return matrix_; }

  /// Dehomogenized forward map. Returns false when the point maps to or
  /// behind the camera's infinity line (w <= 0).
  bool apply(const Vec2& ground, Vec2& pixel) const;
  Vec2 apply(const Vec2& ground) const;
  Homography inverse() const;

 private:
  Mat3 matrix_ = Mat3::Identity();
};

/// Axis-aligned rectangle on the ground plane, meters.
struct GroundRect {
  double min_x = 0.0;
  double max_x = 0.0;
  double min_z = 0.0;
  double max_z = 0.0;

  double width() const { return max_x - min_x; }
  double depth() const { return max_z - min_z; }
};

Vec2 project(const Vec3& point, const CameraIntrinsics& k);
Vec3 backproject_to_plane(const Vec2& pixel, const CameraIntrinsics& k, const GroundPlane& plane);
/// Unit-free ray direction (z = 1) through a pixel.
Vec3 pixel_ray(const Vec2& pixel, const CameraIntrinsics& k);
Homography ground_homography(const CameraIntrinsics& k, const GroundPlane& plane);

/// Output raster dimensions for a birdseye view of `extent`.
std::array<int, 2> birdseye_size(const GroundRect& extent, double meters_per_pixel);

/// Top-down view of `extent`. Output pixel (col, row) shows ground point
/// (min_x + col * mpp, min_z + row * mpp); samples outside the source image
/// or behind the camera are opaque black.
ImageRgb8 warp_birdseye(const ImageRgb8& image, const Homography& h, double meters_per_pixel,
                        const GroundRect& extent);

}  // namespace augmentor
