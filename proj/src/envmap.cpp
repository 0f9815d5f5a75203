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

#include "augmentor/envmap.hpp"

#include "augmentor/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace augmentor {

EnvironmentMap EnvironmentMap::constant(const RgbF& radiance) {
  for (double c : radiance)
    if (!(c >= 0.0)) throw Error(ErrorCode::InvalidArgument, "radiance must be non-negative");
  EnvironmentMap env;
  env.tag_ = EnvTag::constant;
  env.constant_ = radiance;
  return env;
}

EnvironmentMap EnvironmentMap::from_radiance(ImageRgbF radiance, EnvTag tag) {
  if (radiance.empty() || radiance.width() != 2 * radiance.height())
    throw Error(ErrorCode::BadAspect, "environment map must be 2:1, got " +
                                          std::to_string(radiance.width()) + "x" +
                                          std::to_string(radiance.height()));
  for (RgbF& px : radiance.pixels())
    for (double& c : px)
      if (!(c >= 0.0)) c = 0.0;
  EnvironmentMap env;
  env.pixels_ = std::move(radiance);
  env.tag_ = tag == EnvTag::constant ? EnvTag::true_map : tag;
  return env;
}

Vec2 direction_to_uv(const Vec3& dir) noexcept {
  const double u = std::atan2(dir.x(), dir.z()) / (2.0 * std::numbers::pi) + 0.5;
  const double v = std::acos(std::clamp(-dir.y(), -1.0, 1.0)) / std::numbers::pi;
  return {u, v};
}

RgbF EnvironmentMap::lookup(const Vec3& dir) const noexcept {
  if (tag_ == EnvTag::constant) return constant_;
  const Vec2 uv = direction_to_uv(dir);
  const int w = pixels_.width();
  const int h = pixels_.height();
  // Texel centers at (i + 0.5) / size.
  const double fx = uv.x() * w - 0.5;
  const double fy = std::clamp(uv.y() * h - 0.5, 0.0, static_cast<double>(h - 1));
  const double x_floor = std::floor(fx);
  const int y0 = std::min(static_cast<int>(fy), h - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ty = fy - y0;
  const double tx = fx - x_floor;
  int x0 = static_cast<int>(x_floor) % w;
  if (x0 < 0) x0 += w;
  const int x1 = (x0 + 1) % w;
  const RgbF& a = pixels_(x0, y0);
  const RgbF& b = pixels_(x1, y0);
  const RgbF& c = pixels_(x0, y1);
  const RgbF& d = pixels_(x1, y1);
  RgbF out;
  for (int i = 0; i < 3; ++i) {
    const double top = a[i] + (b[i] - a[i]) * tx;
    const double bottom = c[i] + (d[i] - c[i]) * tx;
    out[i] = top + (bottom - top) * ty;
  }
  return out;
}

RgbF EnvironmentMap::sample(const Vec3& dir) const {
  if (std::abs(dir.norm() - 1.0) > 1e-6)
    throw Error(ErrorCode::NonUnitDirection, "environment lookup needs a unit direction");
  return lookup(dir);
}

RgbF sample_direction(const EnvironmentMap& env, const Vec3& dir) { return env.sample(dir); }

EnvironmentMap load_envmap(const ImageRgbF& image, bool gamma_decode) {
  ImageRgbF radiance = image;
  if (gamma_decode)
    for (RgbF& px : radiance.pixels())
      for (double& c : px) c = std::pow(std::max(c, 0.0), 2.2);
  return EnvironmentMap::from_radiance(std::move(radiance));
}

EnvironmentMap load_envmap(const std::filesystem::path& path, bool gamma_decode) {
  LoadedImage img = read_image(path);
  // Float panoramas are already linear.
  if (img.is_hdr()) return load_envmap(img.hdr, false);
  return load_envmap(to_unit_float(img.ldr), gamma_decode);
}

std::shared_ptr<const EnvironmentMap> resolve_env(EnvMode mode,
                                                  const std::optional<std::filesystem::path>& rig_map,
                                                  std::span<const std::filesystem::path> pool,
                                                  Rng& rng, const EnvLoader& load) {
  switch (mode) {
    case EnvMode::true_map: {
      if (!rig_map) throw Error(ErrorCode::MissingTrueMap, "rig has no environment map");
      return load(*rig_map);
    }
    case EnvMode::random_map: {
      if (pool.empty()) throw Error(ErrorCode::EmptyPool, "environment pool is empty");
      return load(pool[rng.index(pool.size())]);
    }
    case EnvMode::none:
      return std::make_shared<const EnvironmentMap>(EnvironmentMap::constant(kNoEnvRadiance));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown environment mode");
}

}  // namespace augmentor
