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
#include "augmentor/image.hpp"
#include "augmentor/renderer.hpp"
#include "augmentor/rle.hpp"
#include "augmentor/rng.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace augmentor {

enum class InstanceOrigin { real, synthetic };
enum class BackgroundMode { real, black, random_image, synthetic_proxy };

struct InstanceAnnotation {
  std::uint32_t instance_id = 0;
  InstanceOrigin origin = InstanceOrigin::synthetic;
  std::string category;
  RleMask mask;
  PixelRect bbox;
  /// Visible / unoccluded pixels; 1.0 for real instances.
  double visible_fraction = 1.0;
};

/// Alpha threshold for a pixel to belong to an instance mask.
inline constexpr double kMaskAlpha = 0.5;
inline constexpr double kDisplayGamma = 2.2;

/// Display 8-bit -> linear, via a 256-entry table.
double decode_display(std::uint8_t v) noexcept;
/// Linear -> display 8-bit, rounded.
std::uint8_t encode_display(double linear) noexcept;

/// Linear-space premultiplied over, with ground shadow applied to the
/// background first.
double over_linear(double fg_premultiplied, double alpha, double bg_linear,
                   double shadow) noexcept;

/// Pixels without coverage or shadow are copied byte for byte.
ImageRgb8 composite(const ImageRgb8& background, const RenderLayer& layer);

std::vector<InstanceAnnotation> derive_annotations(const RenderLayer& layer,
                                                   std::span<const SceneInstance> instances);

std::vector<InstanceAnnotation> update_real_masks(std::span<const InstanceAnnotation> real,
                                                  const RenderLayer& layer);

using ImageLoader = std::function<ImageRgb8(const std::filesystem::path&)>;

/// Scales to cover width x height and crops the center (bilinear).
ImageRgb8 resize_cover(const ImageRgb8& image, int width, int height);

/// Consumes one draw from `rng` in the pool-backed modes only.
ImageRgb8 resolve_background(BackgroundMode mode, const ImageRgb8* real_image,
                             std::span<const std::filesystem::path> pool, Rng& rng, int width,
                             int height, const ImageLoader& load);

std::string_view to_string(InstanceOrigin origin);
std::string_view to_string(BackgroundMode mode);

/// {"image": path, "instances": [{"id", "origin", "category", "bbox": [x,y,w,h], "rle", "visible_fraction"}]}
nlohmann::json annotations_to_json(const std::string& image,
                                   std::span<const InstanceAnnotation> annotations);
std::vector<InstanceAnnotation> annotations_from_json(const nlohmann::json& j);
std::vector<InstanceAnnotation> load_annotations(const std::filesystem::path& path);

}  // namespace augmentor
