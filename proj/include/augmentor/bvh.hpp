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
#include "augmentor/placement.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace augmentor {

struct SceneInstance {
  std::shared_ptr<const CarModel> model;
  Material material;
  PoseSample pose;
  std::uint32_t instance_id = 0;
};

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
};

/// Intersections closer than this along a ray are ignored.
inline constexpr double kRayEpsilon = 1e-9;
/// Hits whose distances differ by less than this are ties.
inline constexpr double kTieEpsilon = 1e-12;

struct WorldTriangle {
  std::array<Vec3, 3> p;
  std::array<Vec3, 3> n;
  std::uint32_t instance_id = 0;
  std::uint32_t triangle_index = 0;
};

struct Hit {
  std::uint32_t instance_id = 0;
  std::uint32_t triangle_index = 0;
  double t = 0.0;
  Vec3 point = Vec3::Zero();
  /// Interpolated vertex normal, oriented toward the ray origin.
  Vec3 normal = Vec3::UnitZ();
  /// Face normal, oriented toward the ray origin.
  Vec3 geometric_normal = Vec3::UnitZ();
};

/// Moller-Trumbore. On success `t` and barycentrics (b1, b2) are set.
bool intersect_triangle(const Ray& ray, const WorldTriangle& tri, double& t, double& b1,
                        double& b2) noexcept;

/// True when (t, instance, triangle) should replace `best` under the
/// nearest-hit ordering with lowest-id tie breaking.
bool closer_hit(double t, std::uint32_t instance_id, std::uint32_t triangle_index,
                const Hit& best) noexcept;

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void grow(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void grow(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool contains(const Aabb& b) const {
    return (min.array() <= b.min.array()).all() && (max.array() >= b.max.array()).all();
  }
  double surface_area() const {
    const Vec3 e = (max - min).cwiseMax(Vec3::Zero());
    return 2.0 * (e.x() * e.y() + e.y() * e.z() + e.z() * e.x());
  }
};

struct BvhNode {
  Aabb bounds;
  /// Leaf: first triangle. Interior: left child (right child follows it).
  std::uint32_t first = 0;
  std::uint32_t count = 0;
  bool is_leaf() const noexcept { return count > 0; }
};

/// Binned-SAH bounding volume hierarchy over the world-space triangles of a
/// scene. Immutable after construction; safe for concurrent queries.
class Bvh {
 public:
  Bvh() = default;

  std::span<const WorldTriangle> triangles() const noexcept { return triangles_; }
  std::span<const BvhNode> nodes() const noexcept { return nodes_; }
  bool empty() const noexcept { return triangles_.empty(); }

  /// Nearest hit with t > kRayEpsilon. Throws NonUnitDirection.
  std::optional<Hit> trace(const Ray& ray) const;
  /// Unchecked variant for the render loop.
  std::optional<Hit> nearest(const Ray& ray) const noexcept;
  /// Any hit with kRayEpsilon < t < t_max.
  bool occluded(const Ray& ray, double t_max) const noexcept;
  /// Ids of every instance the ray crosses at t > kRayEpsilon, sorted.
  void instances_crossed(const Ray& ray, std::vector<std::uint32_t>& out) const;

 private:
  friend Bvh build_bvh(std::span<const SceneInstance> instances, const GroundPlane& plane);
  void build();
  void build_node(std::uint32_t index, std::uint32_t begin, std::uint32_t end,
                  std::vector<Vec3>& centroids, std::vector<Aabb>& boxes);

  std::vector<WorldTriangle> triangles_;
  std::vector<BvhNode> nodes_;
};

Bvh build_bvh(std::span<const SceneInstance> instances, const GroundPlane& plane);

}  // namespace augmentor
