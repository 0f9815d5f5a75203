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

#include "augmentor/bvh.hpp"

#include "augmentor/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace augmentor {

namespace {

constexpr int kBins = 16;
constexpr std::uint32_t kMaxLeaf = 4;
constexpr int kStackSize = 64;

// Slab test against a box padded outward so that flat boxes (one face of an
// axis-aligned mesh) never lose hits to rounding.
bool ray_box(const Ray& ray, const Vec3& inv_dir, const Aabb& box, double t_max,
             double& t_enter) noexcept {
  double lo = kRayEpsilon;
  double hi = t_max;
  const double pad =
      1e-9 * (1.0 + std::max(box.min.cwiseAbs().maxCoeff(), box.max.cwiseAbs().maxCoeff()));
  for (int a = 0; a < 3; ++a) {
    const double bmin = box.min[a] - pad;
    const double bmax = box.max[a] + pad;
    if (ray.direction[a] == 0.0) {
      if (ray.origin[a] < bmin || ray.origin[a] > bmax) return false;
      continue;
    }
    double t0 = (bmin - ray.origin[a]) * inv_dir[a];
    double t1 = (bmax - ray.origin[a]) * inv_dir[a];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (lo > hi) return false;
  }
  t_enter = lo;
  return true;
}

Vec3 inverse_direction(const Vec3& d) noexcept {
  return {d.x() != 0.0 ? 1.0 / d.x() : 0.0, d.y() != 0.0 ? 1.0 / d.y() : 0.0,
          d.z() != 0.0 ? 1.0 / d.z() : 0.0};
}

}  // namespace

bool intersect_triangle(const Ray& ray, const WorldTriangle& tri, double& t, double& b1,
                        double& b2) noexcept {
  const Vec3 e1 = tri.p[1] - tri.p[0];
  const Vec3 e2 = tri.p[2] - tri.p[0];
  const Vec3 pvec = ray.direction.cross(e2);
  const double det = e1.dot(pvec);
  if (det == 0.0) return false;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = ray.origin - tri.p[0];
  b1 = tvec.dot(pvec) * inv_det;
  if (b1 < 0.0 || b1 > 1.0) return false;
  const Vec3 qvec = tvec.cross(e1);
  b2 = ray.direction.dot(qvec) * inv_det;
  if (b2 < 0.0 || b1 + b2 > 1.0) return false;
  t = e2.dot(qvec) * inv_det;
  return t > kRayEpsilon;
}

bool closer_hit(double t, std::uint32_t instance_id, std::uint32_t triangle_index,
                const Hit& best) noexcept {
  if (t < best.t - kTieEpsilon) return true;
  if (t > best.t + kTieEpsilon) return false;
  if (instance_id != best.instance_id) return instance_id < best.instance_id;
  return triangle_index < best.triangle_index;
}

Bvh build_bvh(std::span<const SceneInstance> instances, const GroundPlane& plane) {
  Bvh bvh;
  for (const SceneInstance& inst : instances) {
    const RigidTransform xf = pose_transform(inst.pose, plane);
    const TriangleMesh& mesh = inst.model->mesh;
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
      const MeshTriangle& mt = mesh.triangles[i];
      WorldTriangle wt;
      for (int c = 0; c < 3; ++c) {
        wt.p[c] = xf.apply(mesh.vertices[mt.vertex[c]]);
        wt.n[c] = (xf.linear * mesh.normals[mt.normal[c]]).normalized();
      }
      wt.instance_id = inst.instance_id;
      wt.triangle_index = static_cast<std::uint32_t>(i);
      bvh.triangles_.push_back(wt);
    }
  }
  bvh.build();
  return bvh;
}

void Bvh::build() {
  nodes_.clear();
  if (triangles_.empty()) return;
  std::vector<Vec3> centroids(triangles_.size());
  std::vector<Aabb> boxes(triangles_.size());
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    for (const Vec3& p : triangles_[i].p) boxes[i].grow(p);
    centroids[i] = (triangles_[i].p[0] + triangles_[i].p[1] + triangles_[i].p[2]) / 3.0;
  }
  nodes_.reserve(2 * triangles_.size());
  nodes_.emplace_back();
  build_node(0, 0, static_cast<std::uint32_t>(triangles_.size()), centroids, boxes);
}

// Fills slot `index` with the subtree over triangles [begin, end).
void Bvh::build_node(std::uint32_t index, std::uint32_t begin, std::uint32_t end,
                     std::vector<Vec3>& centroids, std::vector<Aabb>& boxes) {
  Aabb bounds;
  Aabb centroid_bounds;
  for (std::uint32_t i = begin; i < end; ++i) {
    bounds.grow(boxes[i]);
    centroid_bounds.grow(centroids[i]);
  }
  nodes_[index].bounds = bounds;
  const std::uint32_t count = end - begin;

  auto make_leaf = [&] {
    nodes_[index].first = begin;
    nodes_[index].count = count;
  };
  if (count <= kMaxLeaf) return make_leaf();

  const Vec3 extent = centroid_bounds.max - centroid_bounds.min;
  int axis = 0;
  if (extent.y() > extent[axis]) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  std::uint32_t mid = begin;
  if (extent[axis] <= 0.0) {
    mid = begin + count / 2;
  } else {
    struct Bin {
      Aabb box;
      std::uint32_t count = 0;
    };
    std::array<Bin, kBins> bins{};
    const double scale = kBins / extent[axis];
    auto bin_of = [&](std::uint32_t i) {
      const int b = static_cast<int>((centroids[i][axis] - centroid_bounds.min[axis]) * scale);
      return std::clamp(b, 0, kBins - 1);
    };
    for (std::uint32_t i = begin; i < end; ++i) {
      Bin& b = bins[static_cast<std::size_t>(bin_of(i))];
      b.box.grow(boxes[i]);
      ++b.count;
    }
    std::array<double, kBins - 1> left_cost{};
    Aabb acc;
    std::uint32_t n = 0;
    for (int i = 0; i < kBins - 1; ++i) {
      acc.grow(bins[static_cast<std::size_t>(i)].box);
      n += bins[static_cast<std::size_t>(i)].count;
      left_cost[static_cast<std::size_t>(i)] = n == 0 ? 0.0 : acc.surface_area() * n;
    }
    acc = Aabb{};
    n = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    int best_split = -1;
    for (int i = kBins - 1; i > 0; --i) {
      acc.grow(bins[static_cast<std::size_t>(i)].box);
      n += bins[static_cast<std::size_t>(i)].count;
      const double cost = left_cost[static_cast<std::size_t>(i - 1)] + (n == 0 ? 0.0 : acc.surface_area() * n);
      if (cost < best_cost) {
        best_cost = cost;
        best_split = i;
      }
    }
    const double leaf_cost = bounds.surface_area() * count;
    if (count <= 2 * kMaxLeaf && best_cost >= leaf_cost) return make_leaf();

    // Partition triangle ranges in place, keeping the side arrays in step.
    std::uint32_t lo = begin;
    std::uint32_t hi = end;
    while (lo < hi) {
      if (bin_of(lo) < best_split) {
        ++lo;
      } else {
        --hi;
        std::swap(triangles_[lo], triangles_[hi]);
        std::swap(centroids[lo], centroids[hi]);
        std::swap(boxes[lo], boxes[hi]);
      }
    }
    mid = lo;
    if (mid == begin || mid == end) mid = begin + count / 2;
  }

  const auto left = static_cast<std::uint32_t>(nodes_.size());
  nodes_[index].first = left;
  nodes_[index].count = 0;
  nodes_.emplace_back();
  nodes_.emplace_back();
  build_node(left, begin, mid, centroids, boxes);
  build_node(left + 1, mid, end, centroids, boxes);
}

std::optional<Hit> Bvh::trace(const Ray& ray) const {
  if (std::abs(ray.direction.norm() - 1.0) > 1e-6)
    throw Error(ErrorCode::NonUnitDirection, "ray direction must be unit length");
  return nearest(ray);
}

std::optional<Hit> Bvh::nearest(const Ray& ray) const noexcept {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv = inverse_direction(ray.direction);
  Hit best;
  best.t = std::numeric_limits<double>::infinity();
  double best_b1 = 0.0, best_b2 = 0.0;
  const WorldTriangle* best_tri = nullptr;

  std::array<std::uint32_t, kStackSize> stack{};
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const BvhNode& node = nodes_[stack[--top]];
    double t_enter = 0.0;
    if (!ray_box(ray, inv, node.bounds, best.t + kTieEpsilon, t_enter)) continue;
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const WorldTriangle& tri = triangles_[i];
        double t, b1, b2;
        if (!intersect_triangle(ray, tri, t, b1, b2)) continue;
        if (best_tri && !closer_hit(t, tri.instance_id, tri.triangle_index, best)) continue;
        best.t = t;
        best.instance_id = tri.instance_id;
        best.triangle_index = tri.triangle_index;
        best_b1 = b1;
        best_b2 = b2;
        best_tri = &tri;
      }
      continue;
    }
    // Visit the nearer child first.
    const std::uint32_t left = node.first;
    const std::uint32_t right = node.first + 1;
    double tl = 0.0, tr = 0.0;
    const bool hl = ray_box(ray, inv, nodes_[left].bounds, best.t + kTieEpsilon, tl);
    const bool hr = ray_box(ray, inv, nodes_[right].bounds, best.t + kTieEpsilon, tr);
    if (hl && hr) {
      if (tl <= tr) {
        stack[top++] = right;
        stack[top++] = left;
      } else {
        stack[top++] = left;
        stack[top++] = right;
      }
    } else if (hl) {
      stack[top++] = left;
    } else if (hr) {
      stack[top++] = right;
    }
  }
  if (!best_tri) return std::nullopt;

  best.point = ray.origin + best.t * ray.direction;
  const Vec3 e1 = best_tri->p[1] - best_tri->p[0];
  const Vec3 e2 = best_tri->p[2] - best_tri->p[0];
  Vec3 geo = e1.cross(e2);
  geo = geo.norm() > 0.0 ? Vec3(geo.normalized()) : Vec3(-ray.direction);
  if (geo.dot(ray.direction) > 0.0) geo = -geo;
  Vec3 shading = (1.0 - best_b1 - best_b2) * best_tri->n[0] + best_b1 * best_tri->n[1] +
                 best_b2 * best_tri->n[2];
  shading = shading.norm() > 0.0 ? Vec3(shading.normalized()) : geo;
  if (shading.dot(geo) < 0.0) shading = -shading;
  best.geometric_normal = geo;
  best.normal = shading;
  return best;
}

bool Bvh::occluded(const Ray& ray, double t_max) const noexcept {
  if (nodes_.empty()) return false;
  const Vec3 inv = inverse_direction(ray.direction);
  std::array<std::uint32_t, kStackSize> stack{};
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const BvhNode& node = nodes_[stack[--top]];
    double t_enter = 0.0;
    if (!ray_box(ray, inv, node.bounds, t_max, t_enter)) continue;
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        double t, b1, b2;
        if (intersect_triangle(ray, triangles_[i], t, b1, b2) && t < t_max) return true;
      }
      continue;
    }
    stack[top++] = node.first;
    stack[top++] = node.first + 1;
  }
  return false;
}

void Bvh::instances_crossed(const Ray& ray, std::vector<std::uint32_t>& out) const {
  out.clear();
  if (nodes_.empty()) return;
  const Vec3 inv = inverse_direction(ray.direction);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<std::uint32_t, kStackSize> stack{};
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const BvhNode& node = nodes_[stack[--top]];
    double t_enter = 0.0;
    if (!ray_box(ray, inv, node.bounds, inf, t_enter)) continue;
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const WorldTriangle& tri = triangles_[i];
        if (std::find(out.begin(), out.end(), tri.instance_id) != out.end()) continue;
        double t, b1, b2;
        if (intersect_triangle(ray, tri, t, b1, b2)) out.push_back(tri.instance_id);
      }
      continue;
    }
    stack[top++] = node.first;
    stack[top++] = node.first + 1;
  }
  std::sort(out.begin(), out.end());
}

}  // namespace augmentor
