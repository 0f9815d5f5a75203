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

#include "augmentor/renderer.hpp"

#include "augmentor/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <thread>
#include <unordered_map>

namespace augmentor {

namespace {

// Branchless orthonormal basis (Duff et al. 2017).
void orthonormal_basis(const Vec3& n, Vec3& t, Vec3& b) noexcept {
  const double sign = std::copysign(1.0, n.z());
  const double a = -1.0 / (sign + n.z());
  const double c = n.x() * n.y() * a;
  t = Vec3(1.0 + sign * n.x() * n.x() * a, sign * c, -sign * n.x());
  b = Vec3(c, sign + n.y() * n.y() * a, -n.y());
}

Vec3 cosine_direction(const Vec3& n, PixelRng& rng) noexcept {
  const double r1 = rng.uniform();
  const double r2 = rng.uniform();
  const double phi = 2.0 * std::numbers::pi * r1;
  const double r = std::sqrt(r2);
  Vec3 t, b;
  orthonormal_basis(n, t, b);
  return (r * std::cos(phi) * t + r * std::sin(phi) * b + std::sqrt(std::max(0.0, 1.0 - r2)) * n)
      .normalized();
}

double surface_offset(const Vec3& p) noexcept { return 1e-7 * (1.0 + p.cwiseAbs().maxCoeff()); }

}  // namespace

void RenderSettings::validate() const {
  if (samples_per_pixel < 1 || diffuse_env_samples < 1 || shadow_samples < 1)
    throw Error(ErrorCode::RangeViolation, "render sample counts must be >= 1");
  if (!(max_shadow >= 0.0 && max_shadow <= 1.0))
    throw Error(ErrorCode::RangeViolation, "max_shadow must lie in [0, 1]");
}

RenderLayer RenderLayer::empty(int width, int height) {
  RenderLayer layer;
  layer.color = Raster<RgbaF>(width, height, RgbaF{0.0, 0.0, 0.0, 0.0});
  layer.depth = Raster<double>(width, height, std::numeric_limits<double>::infinity());
  layer.instance_ids = Raster<std::uint32_t>(width, height, 0u);
  layer.shadow_alpha = Raster<double>(width, height, 0.0);
  return layer;
}

double schlick_fresnel(double cos_theta) noexcept {
  constexpr double f0 = 0.04;
  const double m = 1.0 - std::clamp(cos_theta, 0.0, 1.0);
  return f0 + (1.0 - f0) * m * m * m * m * m;
}

double unoccluded_fraction(const Vec3& point, const Vec3& normal, const Bvh& bvh, int samples,
                           PixelRng& rng) {
  const Vec3 origin = point + surface_offset(point) * normal;
  int open = 0;
  for (int i = 0; i < samples; ++i) {
    const Vec3 dir = cosine_direction(normal, rng);
    if (!bvh.occluded(Ray{origin, dir}, std::numeric_limits<double>::infinity())) ++open;
  }
  return static_cast<double>(open) / samples;
}

RgbF shade(const Hit& hit, const Vec3& view_dir, const EnvironmentMap& env,
           const Material& material, const Bvh& bvh, const RenderSettings& settings,
           PixelRng& rng) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Vec3& n = hit.normal;
  const Vec3 origin = hit.point + surface_offset(hit.point) * hit.geometric_normal;

  RgbF irradiance{0.0, 0.0, 0.0};
  for (int i = 0; i < settings.diffuse_env_samples; ++i) {
    const Vec3 dir = cosine_direction(n, rng);
    if (dir.dot(hit.geometric_normal) <= 0.0) continue;
    if (bvh.occluded(Ray{origin, dir}, inf)) continue;
    const RgbF l = env.lookup(dir);
    for (int c = 0; c < 3; ++c) irradiance[c] += l[c];
  }
  RgbF out;
  for (int c = 0; c < 3; ++c)
    out[c] = material.base_color[c] * irradiance[c] / settings.diffuse_env_samples;

  if (material.finish == Finish::mirror && material.specular_weight > 0.0) {
    const double cos_theta = -view_dir.dot(n);
    const Vec3 mirror = (view_dir - 2.0 * view_dir.dot(n) * n).normalized();
    if (mirror.dot(hit.geometric_normal) > 0.0 && !bvh.occluded(Ray{origin, mirror}, inf)) {
      const double w = material.specular_weight * schlick_fresnel(cos_theta);
      const RgbF l = env.lookup(mirror);
      for (int c = 0; c < 3; ++c) out[c] += w * l[c];
    }
  }
  return out;
}

void check_instance_ids(std::span<const SceneInstance> instances) {
  std::set<std::uint32_t> seen;
  for (const SceneInstance& inst : instances) {
    if (inst.instance_id == 0)
      throw Error(ErrorCode::DuplicateInstanceId, "instance id 0 is reserved for background");
    if (!seen.insert(inst.instance_id).second)
      throw Error(ErrorCode::DuplicateInstanceId,
                  "instance id " + std::to_string(inst.instance_id) + " used twice");
  }
}

RenderLayer render_layer(std::span<const SceneInstance> instances, const CameraCalibration& rig,
                         const EnvironmentMap& env, const RenderSettings& settings,
                         std::uint64_t image_index, int threads) {
  settings.validate();
  check_instance_ids(instances);
  const CameraIntrinsics& k = rig.intrinsics;
  k.validate();
  const int w = k.width;
  const int h = k.height;
  RenderLayer layer = RenderLayer::empty(w, h);
  if (instances.empty()) return layer;

  const Bvh bvh = build_bvh(instances, rig.plane);
  std::unordered_map<std::uint32_t, const Material*> materials;
  for (const SceneInstance& inst : instances) materials[inst.instance_id] = &inst.material;
  const bool multi = instances.size() > 1;

  // Ground normal oriented toward the camera.
  const Vec3 ground_up = rig.plane.offset < 0.0 ? rig.plane.normal : Vec3(-rig.plane.normal);
  const int spp = settings.samples_per_pixel;

  std::atomic<int> next_row{0};
  std::vector<std::map<std::uint32_t, std::uint64_t>> iso_per_worker(
      static_cast<std::size_t>(std::max(1, threads)));

  auto worker = [&](std::size_t worker_index) {
    auto& iso_area = iso_per_worker[worker_index];
    std::vector<std::uint32_t> crossed;
    std::vector<double> jitter;
    std::vector<std::pair<std::uint32_t, int>> nearest_counts;
    std::vector<std::pair<std::uint32_t, int>> iso_counts;
    auto bump = [](std::vector<std::pair<std::uint32_t, int>>& counts, std::uint32_t id) {
      for (auto& [cid, n] : counts)
        if (cid == id) {
          ++n;
          return;
        }
      counts.emplace_back(id, 1);
    };

    for (int y = next_row++; y < h; y = next_row++) {
      for (int x = 0; x < w; ++x) {
        PixelRng rng = seeded_pixel_rng(settings.rng_seed, image_index, static_cast<std::uint32_t>(x),
                                        static_cast<std::uint32_t>(y));
        nearest_counts.clear();
        iso_counts.clear();
        RgbF sum{0.0, 0.0, 0.0};
        int hits = 0;
        double min_depth = std::numeric_limits<double>::infinity();
        double shadow_sum = 0.0;
        // Sub-pixel positions are drawn before any shading so coverage does
        // not depend on what the samples hit.
        jitter.assign(static_cast<std::size_t>(2 * spp), 0.0);
        if (spp > 1)
          for (double& j : jitter) j = rng.uniform() - 0.5;
        for (int s = 0; s < spp; ++s) {
          const double ox = jitter[static_cast<std::size_t>(2 * s)];
          const double oy = jitter[static_cast<std::size_t>(2 * s + 1)];
          const Vec3 dir = pixel_ray(Vec2(x + ox, y + oy), k).normalized();
          const Ray ray{Vec3::Zero(), dir};
          const std::optional<Hit> hit = bvh.nearest(ray);
          if (hit) {
            ++hits;
            bump(nearest_counts, hit->instance_id);
            min_depth = std::min(min_depth, hit->t * dir.z());
            if (multi) {
              bvh.instances_crossed(ray, crossed);
              for (std::uint32_t id : crossed) bump(iso_counts, id);
            } else {
              bump(iso_counts, hit->instance_id);
            }
            const RgbF c = shade(*hit, dir, env, *materials.at(hit->instance_id), bvh, settings, rng);
            for (int i = 0; i < 3; ++i) sum[i] += std::clamp(c[i], 0.0, 1.0);
          } else if (settings.enable_shadows) {
            const double denom = rig.plane.normal.dot(dir);
            if (denom != 0.0) {
              const double t = rig.plane.offset / denom;
              if (t > 0.0)
                shadow_sum += 1.0 - unoccluded_fraction(t * dir, ground_up, bvh,
                                                        settings.shadow_samples, rng);
            }
          }
        }

        if (hits > 0) {
          const double alpha = static_cast<double>(hits) / spp;
          RgbaF& px = layer.color(x, y);
          for (int i = 0; i < 3; ++i) px[i] = std::min(sum[i] / spp, alpha);
          px[3] = alpha;
          layer.depth(x, y) = min_depth;
          std::uint32_t best_id = 0;
          int best_n = 0;
          for (const auto& [id, n] : nearest_counts)
            if (n > best_n || (n == best_n && id < best_id)) {
              best_id = id;
              best_n = n;
            }
          layer.instance_ids(x, y) = best_id;
          for (const auto& [id, n] : iso_counts)
            if (2 * n >= spp) ++iso_area[id];
        } else {
          layer.shadow_alpha(x, y) = std::clamp(shadow_sum / spp, 0.0, settings.max_shadow);
        }
      }
    }
  };

  const int workers = std::max(1, threads);
  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker, static_cast<std::size_t>(i));
  }
  for (const auto& part : iso_per_worker)
    for (const auto& [id, n] : part) layer.isolated_area[id] += n;
  return layer;
}

}  // namespace augmentor
