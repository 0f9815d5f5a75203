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

#include "augmentor/placement.hpp"

#include "augmentor/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace augmentor {

using json = nlohmann::json;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double radians) {
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

PoseSample PoseSample::on_plane(const GroundPlane& plane, const Vec2& ground, double yaw) {
  PoseSample p;
  p.kind = PoseKind::on_plane;
  p.position = plane.lift(ground);
  p.yaw = wrap_angle(yaw);
  return p;
}

PoseSample PoseSample::free(const Vec3& position, const Eigen::Quaterniond& rotation) {
  PoseSample p;
  p.kind = PoseKind::free;
  p.position = position;
  p.rotation = rotation.normalized();
  return p;
}

RigidTransform pose_transform(const PoseSample& pose, const GroundPlane& plane) {
  RigidTransform t;
  t.translation = pose.position;
  if (pose.kind == PoseKind::on_plane) {
    const Vec3 ex = plane.x_axis();
    const Vec3 ez = plane.z_axis();
    const double c = std::cos(pose.yaw);
    const double s = std::sin(pose.yaw);
    t.linear.col(0) = c * ex - s * ez;
    t.linear.col(1) = plane.normal;
    t.linear.col(2) = s * ex + c * ez;
  } else {
    // Model y is up; camera y is down.
    t.linear = pose.rotation.toRotationMatrix() * Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
  }
  return t;
}

void TrajectorySet::validate() const {
  for (const auto& line : polylines) {
    if (line.size() < 2) throw Error(ErrorCode::InvalidArgument, "polyline needs at least 2 points");
    for (std::size_t i = 1; i < line.size(); ++i)
      if (line[i] == line[i - 1])
        throw Error(ErrorCode::InvalidArgument, "polyline has repeated consecutive points");
  }
}

void PlacementRegion::validate() const {
  if (!(min_x < max_x) || !(min_z < max_z))
    throw Error(ErrorCode::InvalidArgument, "placement region bounds must satisfy min < max");
  if (max_count < 0) throw Error(ErrorCode::InvalidArgument, "placement region max_count < 0");
}

void VolumeBounds::validate() const {
  if (!(min.array() <= max.array()).all())
    throw Error(ErrorCode::InvalidArgument, "volume bounds must satisfy min <= max");
}

TrajectorySet parse_trajectories(std::string_view json_text, std::string source) {
  TrajectorySet set;
  set.source = std::move(source);
  try {
    const json j = json::parse(json_text);
    for (const json& line : j.at("polylines")) {
      std::vector<Vec2> pts;
      for (const json& p : line) {
        if (!p.is_array() || p.size() != 2)
          throw Error(ErrorCode::InvalidArgument, "trajectory point must be [x, z]");
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      set.polylines.push_back(std::move(pts));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "trajectory file " + set.source + ": " + e.what());
  }
  set.validate();
  return set;
}

TrajectorySet load_trajectories(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open trajectories " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trajectories(ss.str(), path.string());
}

std::vector<PoseSample> sample_manual(const TrajectorySet& traj, const GroundPlane& plane,
                                      int count, Rng& rng) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative sample count");
  std::vector<PoseSample> out;
  if (count == 0) return out;
  traj.validate();
  struct Segment {
    Vec2 a, b;
  };
  std::vector<Segment> segments;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& line : traj.polylines) {
    for (std::size_t i = 1; i < line.size(); ++i) {
      segments.push_back({line[i - 1], line[i]});
      total += (line[i] - line[i - 1]).norm();
      cumulative.push_back(total);
    }
  }
  if (segments.empty()) throw Error(ErrorCode::EmptyTrajectorySet, "no trajectories to sample from");

  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const double s = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    if (it == cumulative.end()) --it;
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    const Segment& seg = segments[idx];
    const double start = idx == 0 ? 0.0 : cumulative[idx - 1];
    const double len = cumulative[idx] - start;
    const double f = std::clamp((s - start) / len, 0.0, 1.0);
    const Vec2 dir = seg.b - seg.a;
    double yaw = std::atan2(dir.x(), dir.y());
    if (rng.coin()) yaw += std::numbers::pi;
    out.push_back(PoseSample::on_plane(plane, seg.a + f * dir, yaw));
  }
  return out;
}

std::vector<PoseSample> sample_road_mask(const ImageGray8& mask, const CameraIntrinsics& k,
                                         const GroundPlane& plane, int count, Rng& rng) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative sample count");
  if (!mask.same_shape(k.width, k.height))
    throw Error(ErrorCode::DimensionMismatch, "road mask size differs from the camera image");
  std::vector<PoseSample> out;
  if (count == 0) return out;

  // Road pixels whose rays reach the plane in front of the camera.
  std::vector<Vec3> candidates;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask(x, y) == 0) continue;
      const Vec3 dir = pixel_ray(Vec2(x, y), k);
      const double denom = plane.normal.dot(dir);
      if (std::abs(denom) < 1e-12) continue;
      const double t = plane.offset / denom;
      if (t > 0.0) candidates.push_back(t * dir);
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::EmptyRoadMask, "road mask has no usable pixels");

  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const Vec3& p = candidates[rng.index(candidates.size())];
    PoseSample pose;
    pose.kind = PoseKind::on_plane;
    pose.position = p;
    pose.yaw = wrap_angle(rng.uniform() * kTwoPi);
    out.push_back(pose);
  }
  return out;
}

std::vector<PoseSample> sample_ground_plane(const PlacementRegion& region,
                                            const GroundPlane& plane, int count, Rng& rng) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative sample count");
  region.validate();
  const int n = std::min(count, region.max_count);
  std::vector<PoseSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(region.min_x, region.max_x);
    const double z = rng.uniform(region.min_z, region.max_z);
    const double yaw = rng.uniform() * kTwoPi;
    out.push_back(PoseSample::on_plane(plane, Vec2(x, z), yaw));
  }
  return out;
}

std::vector<PoseSample> sample_unconstrained(const VolumeBounds& bounds, int count, Rng& rng) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative sample count");
  bounds.validate();
  std::vector<PoseSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = rng.uniform(bounds.min[a], bounds.max[a]);
    // Shoemake's uniform rotation.
    const double u1 = rng.uniform();
    const double u2 = rng.uniform() * kTwoPi;
    const double u3 = rng.uniform() * kTwoPi;
    const double r1 = std::sqrt(1.0 - u1);
    const double r2 = std::sqrt(u1);
    const Eigen::Quaterniond q(r2 * std::cos(u3), r1 * std::sin(u2), r1 * std::cos(u2),
                               r2 * std::sin(u3));
    out.push_back(PoseSample::free(p, q));
  }
  return out;
}

std::vector<std::size_t> collision_free_indices(std::span<const PoseSample> poses,
                                                std::span<const CarModel* const> models,
                                                const GroundPlane& plane) {
  if (poses.size() != models.size())
    throw Error(ErrorCode::InvalidArgument, "poses and models differ in length");
  std::vector<std::size_t> kept;
  std::vector<Footprint> accepted;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (poses[i].kind == PoseKind::free) {
      kept.push_back(i);
      continue;
    }
    const Footprint fp = footprint(*models[i], poses[i], plane);
    const bool hits = std::any_of(accepted.begin(), accepted.end(),
                                  [&](const Footprint& other) { return fp.intersects(other); });
    if (hits) continue;
    accepted.push_back(fp);
    kept.push_back(i);
  }
  return kept;
}

std::vector<PoseSample> filter_collisions(std::span<const PoseSample> poses,
                                          std::span<const CarModel* const> models,
                                          const GroundPlane& plane) {
  std::vector<PoseSample> out;
  for (std::size_t i : collision_free_indices(poses, models, plane)) out.push_back(poses[i]);
  return out;
}

}  // namespace augmentor
