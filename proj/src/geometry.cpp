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

#include "augmentor/geometry.hpp"

#include "augmentor/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace augmentor {

void CameraIntrinsics::validate() const {
  if (!(focal_x > 0.0) || !(focal_y > 0.0))
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(center_x >= 0.0 && center_x < width && center_y >= 0.0 && center_y < height))
    throw Error(ErrorCode::InvalidArgument, "principal point outside image");
}

Mat3 CameraIntrinsics::matrix() const {
  Mat3 k;
  k << focal_x, 0.0, center_x, 0.0, focal_y, center_y, 0.0, 0.0, 1.0;
  return k;
}

GroundPlane GroundPlane::from_height(double height) {
  return GroundPlane{Vec3(0.0, -1.0, 0.0), -height};
}

void GroundPlane::validate() const {
  if (std::abs(normal.norm() - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "plane normal must be unit length");
  if (offset == 0.0)
    throw Error(ErrorCode::DegeneratePlane, "plane passes through the camera origin");
}

Vec3 GroundPlane::x_axis() const {
  // Camera x projected into the plane; camera z as fallback when the plane
  // is perpendicular to x.
  Vec3 axis = Vec3::UnitX() - normal.x() * normal;
  if (axis.norm() < 1e-6) axis = Vec3::UnitZ() - normal.z() * normal;
  return axis.normalized();
}

Vec3 GroundPlane::z_axis() const { return normal.cross(x_axis()); }

Vec3 GroundPlane::lift(const Vec2& ground) const {
  return origin() + ground.x() * x_axis() + ground.y() * z_axis();
}

Vec2 GroundPlane::plane_coords(const Vec3& p) const {
  const Vec3 d = p - origin();
  return {d.dot(x_axis()), d.dot(z_axis())};
}

Homography::Homography(const Mat3& m) : matrix_(m) {
  if (!std::isfinite(m.determinant()) || std::abs(m.determinant()) == 0.0)
    throw Error(ErrorCode::InvalidArgument, "homography is singular");
}

bool Homography::apply(const Vec2& ground, Vec2& pixel) const {
  const Vec3 h = matrix_ * Vec3(ground.x(), ground.y(), 1.0);
  if (!(h.z() > 0.0)) return false;
  pixel = {h.x() / h.z(), h.y() / h.z()};
  return true;
}

Vec2 Homography::apply(const Vec2& ground) const {
  const Vec3 h = matrix_ * Vec3(ground.x(), ground.y(), 1.0);
  return {h.x() / h.z(), h.y() / h.z()};
}

Homography Homography::inverse() const { return Homography(matrix_.inverse()); }

Vec2 project(const Vec3& point, const CameraIntrinsics& k) {
  if (!(point.z() > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "point at or behind camera");
  return {k.focal_x * point.x() / point.z() + k.center_x,
          k.focal_y * point.y() / point.z() + k.center_y};
}

Vec3 pixel_ray(const Vec2& pixel, const CameraIntrinsics& k) {
  return {(pixel.x() - k.center_x) / k.focal_x, (pixel.y() - k.center_y) / k.focal_y, 1.0};
}

Vec3 backproject_to_plane(const Vec2& pixel, const CameraIntrinsics& k, const GroundPlane& plane) {
  const Vec3 dir = pixel_ray(pixel, k);
  const double denom = plane.normal.dot(dir);
  if (std::abs(denom) < 1e-12 * dir.norm())
    throw Error(ErrorCode::RayParallelToPlane, "pixel ray is parallel to the ground plane");
  const double t = plane.offset / denom;
  if (!(t > 0.0))
    throw Error(ErrorCode::IntersectionBehindCamera, "pixel ray meets the plane behind the camera");
  return t * dir;
}

Homography ground_homography(const CameraIntrinsics& k, const GroundPlane& plane) {
  if (plane.offset == 0.0)
    throw Error(ErrorCode::DegeneratePlane, "plane passes through the camera origin");
  Mat3 basis;
  basis.col(0) = plane.x_axis();
  basis.col(1) = plane.z_axis();
  basis.col(2) = plane.origin();
  return Homography(k.matrix() * basis);
}

std::array<int, 2> birdseye_size(const GroundRect& extent, double meters_per_pixel) {
  if (!(meters_per_pixel > 0.0))
    throw Error(ErrorCode::InvalidArgument, "meters_per_pixel must be positive");
  if (!(extent.width() > 0.0) || !(extent.depth() > 0.0))
    throw Error(ErrorCode::EmptyExtent, "birdseye extent has zero area");
  const int w = static_cast<int>(std::lround(extent.width() / meters_per_pixel));
  const int h = static_cast<int>(std::lround(extent.depth() / meters_per_pixel));
  if (w <= 0 || h <= 0) throw Error(ErrorCode::EmptyExtent, "birdseye extent smaller than a pixel");
  return {w, h};
}

namespace {

// Unit Frobenius norm, sign fixed by the first significant entry, entries
// rounded to 32 significant bits. Any nonzero multiple of a matrix maps to
// the same representative, which makes the warp independent of scale.
Mat3 canonical_scale(const Mat3& m) {
  Mat3 n = m / m.norm();
  const double peak = n.cwiseAbs().maxCoeff();
  double sign = 1.0;
  for (int i = 0; i < 9; ++i) {
    const double v = n(i / 3, i % 3);
    if (std::abs(v) > 1e-6 * peak) {
      sign = v < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  for (int i = 0; i < 9; ++i) {
    double& v = n(i / 3, i % 3);
    int exp = 0;
    const double mant = std::frexp(sign * v, &exp);
    v = std::ldexp(std::nearbyint(std::ldexp(mant, 32)), exp - 32);
  }
  return n;
}

}  // namespace

ImageRgb8 warp_birdseye(const ImageRgb8& image, const Homography& h, double meters_per_pixel,
                        const GroundRect& extent) {
  const auto [out_w, out_h] = birdseye_size(extent, meters_per_pixel);
  const Mat3 m = canonical_scale(h.matrix());
  ImageRgb8 out(out_w, out_h, Rgb8{0, 0, 0});
  const double max_u = image.width() - 1;
  const double max_v = image.height() - 1;
  for (int row = 0; row < out_h; ++row) {
    const double gz = extent.min_z + row * meters_per_pixel;
    for (int col = 0; col < out_w; ++col) {
      const double gx = extent.min_x + col * meters_per_pixel;
      const Vec3 p = m * Vec3(gx, gz, 1.0);
      if (!(p.z() > 0.0)) continue;
      const double u = p.x() / p.z();
      const double v = p.y() / p.z();
      if (!(u >= 0.0 && v >= 0.0 && u <= max_u && v <= max_v)) continue;
      const int x0 = std::min(static_cast<int>(u), image.width() - 1);
      const int y0 = std::min(static_cast<int>(v), image.height() - 1);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const int y1 = std::min(y0 + 1, image.height() - 1);
      const double fx = u - x0;
      const double fy = v - y0;
      Rgb8& dst = out(col, row);
      for (int c = 0; c < 3; ++c) {
        const double top = image(x0, y0)[c] * (1.0 - fx) + image(x1, y0)[c] * fx;
        const double bottom = image(x0, y1)[c] * (1.0 - fx) + image(x1, y1)[c] * fx;
        const double value = top * (1.0 - fy) + bottom * fy;
        dst[c] = static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

}  // namespace augmentor
