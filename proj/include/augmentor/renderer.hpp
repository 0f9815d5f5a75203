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

#include "augmentor/bvh.hpp"
#include "augmentor/envmap.hpp"
#include "augmentor/geometry.hpp"
#include "augmentor/image.hpp"
#include "augmentor/rng.hpp"

#include <cstdint>
#include <map>
#include <span>

namespace augmentor {

struct CameraCalibration {
  CameraIntrinsics intrinsics;
  GroundPlane plane;
};

struct RenderSettings {
  int samples_per_pixel = 4;
  int diffuse_env_samples = 64;
  int shadow_samples = 32;
  bool enable_shadows = true;
  /// Upper bound on the ground darkening factor.
  double max_shadow = 0.6;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Synthetic foreground for one composite.
struct RenderLayer {
  /// Premultiplied linear RGBA.
  Raster<RgbaF> color;
  /// Camera-space z of the nearest hit; +inf where nothing was hit.
  Raster<double> depth;
  Raster<std::uint32_t> instance_ids;
  Raster<double> shadow_alpha;
  /// Per instance: pixels whose coverage would reach 1/2 if the instance were
  /// rendered alone (sample-exact, same sub-pixel positions as the render).
  std::map<std::uint32_t, std::uint64_t> isolated_area;

  static RenderLayer empty(int width, int height);
  int width() const noexcept { return color.width(); }
  int height() const noexcept { return color.height(); }
  double alpha(int x, int y) const noexcept { return color(x, y)[3]; }
};

/// One bounce of image-based lighting: cosine-weighted diffuse with shadow
/// rays, plus a Schlick-weighted mirror lobe. Result is unclamped linear RGB.
RgbF shade(const Hit& hit, const Vec3& view_dir, const EnvironmentMap& env,
           const Material& material, const Bvh& bvh, const RenderSettings& settings,
           PixelRng& rng);

/// Schlick's Fresnel approximation with F0 = 0.04.
double schlick_fresnel(double cos_theta) noexcept;

/// Fraction of `samples` cosine-weighted directions around `normal` that
/// escape the scene from `point`.
double unoccluded_fraction(const Vec3& point, const Vec3& normal, const Bvh& bvh, int samples,
                           PixelRng& rng);

/// Renders all instances. `threads` only changes speed: every pixel draws
/// from its own counter-based stream, so output is bit-identical for any
/// worker count.
RenderLayer render_layer(std::span<const SceneInstance> instances, const CameraCalibration& rig,
                         const EnvironmentMap& env, const RenderSettings& settings,
                         std::uint64_t image_index = 0, int threads = 1);

/// Throws DuplicateInstanceId on repeated or zero ids.
void check_instance_ids(std::span<const SceneInstance> instances);

}  // namespace augmentor
