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
#include "augmentor/image.hpp"
#include "augmentor/rng.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>

namespace augmentor {

enum class EnvMode { true_map, random_map, none };
enum class EnvTag { true_map, random_map, constant };

/// Equirectangular radiance panorama in the camera frame. Forward (+z) is
/// the map center, up (-y) is the top row.
class EnvironmentMap {
 public:
  /// White-furnace map: every direction returns `radiance`.
  static EnvironmentMap constant(const RgbF& radiance);
  /// Takes ownership of linear radiance; width must be twice the height.
  static EnvironmentMap from_radiance(ImageRgbF radiance, EnvTag tag = EnvTag::true_map);

  EnvTag tag() const noexcept { return tag_; }
  void set_tag(EnvTag tag) noexcept { tag_ = tag; }
  const ImageRgbF& pixels() const noexcept { return pixels_; }
  const RgbF& constant_radiance() const noexcept { return constant_; }

  /// Throws NonUnitDirection unless |dir| = 1 within 1e-6.
  RgbF sample(const Vec3& dir) const;
  /// Same lookup without the unit-length check; callers guarantee it.
  RgbF lookup(const Vec3& dir) const noexcept;

 private:
  ImageRgbF pixels_;
  EnvTag tag_ = EnvTag::constant;
  RgbF constant_{1.0, 1.0, 1.0};
};

/// Equirect texture coordinates in [0,1]^2 for a unit direction.
Vec2 direction_to_uv(const Vec3& dir) noexcept;

/// From an 8-bit or float raster. With `gamma_decode`, values are raised to 2.2.
EnvironmentMap load_envmap(const ImageRgbF& image, bool gamma_decode);
EnvironmentMap load_envmap(const std::filesystem::path& path, bool gamma_decode);

RgbF sample_direction(const EnvironmentMap& env, const Vec3& dir);

using EnvLoader =
    std::function<std::shared_ptr<const EnvironmentMap>(const std::filesystem::path&)>;

/// Radiance of the "no environment map" mode.
inline constexpr RgbF kNoEnvRadiance{1.0, 1.0, 1.0};

/// Consumes one draw from `rng` in random_map mode only.
std::shared_ptr<const EnvironmentMap> resolve_env(EnvMode mode,
                                                  const std::optional<std::filesystem::path>& rig_map,
                                                  std::span<const std::filesystem::path> pool,
                                                  Rng& rng, const EnvLoader& load);

}  // namespace augmentor
