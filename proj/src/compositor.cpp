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

#include "augmentor/compositor.hpp"

#include "augmentor/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

namespace augmentor {

using json = nlohmann::json;

namespace {

const std::array<double, 256>& decode_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = std::pow(i / 255.0, kDisplayGamma);
    return t;
  }();
  return table;
}

}  // namespace

double decode_display(std::uint8_t v) noexcept { return decode_table()[v]; }

std::uint8_t encode_display(double linear) noexcept {
  const double d = std::pow(std::clamp(linear, 0.0, 1.0), 1.0 / kDisplayGamma);
  return static_cast<std::uint8_t>(std::clamp(std::floor(255.0 * d + 0.5), 0.0, 255.0));
}

double over_linear(double fg_premultiplied, double alpha, double bg_linear,
                   double shadow) noexcept {
  return fg_premultiplied + bg_linear * (1.0 - shadow) * (1.0 - alpha);
}

ImageRgb8 composite(const ImageRgb8& background, const RenderLayer& layer) {
  if (!background.same_shape(layer.color) || !background.same_shape(layer.shadow_alpha))
    throw Error(ErrorCode::DimensionMismatch, "background and layer sizes differ");
  ImageRgb8 out = background;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const RgbaF& fg = layer.color[i];
    const double shadow = layer.shadow_alpha[i];
    if (fg[3] == 0.0 && shadow == 0.0) continue;
    Rgb8& px = out[i];
    for (int c = 0; c < 3; ++c)
      px[c] = encode_display(over_linear(fg[c], fg[3], decode_display(px[c]), shadow));
  }
  return out;
}

std::vector<InstanceAnnotation> derive_annotations(const RenderLayer& layer,
                                                   std::span<const SceneInstance> instances) {
  std::vector<const SceneInstance*> ordered;
  for (const SceneInstance& inst : instances) ordered.push_back(&inst);
  std::sort(ordered.begin(), ordered.end(),
            [](const SceneInstance* a, const SceneInstance* b) { return a->instance_id < b->instance_id; });

  std::vector<InstanceAnnotation> out;
  for (const SceneInstance* inst : ordered) {
    BinaryMask mask(layer.width(), layer.height(), 0);
    std::uint64_t area = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (layer.instance_ids[i] == inst->instance_id && layer.color[i][3] >= kMaskAlpha) {
        mask[i] = 1;
        ++area;
      }
    }
    if (area == 0) continue;
    InstanceAnnotation ann;
    ann.instance_id = inst->instance_id;
    ann.origin = InstanceOrigin::synthetic;
    ann.category = inst->model ? std::string(to_string(inst->model->category)) : "other";
    ann.bbox = tight_bbox(mask);
    ann.mask = RleMask::encode(mask);
    const auto iso = layer.isolated_area.find(inst->instance_id);
    const std::uint64_t isolated = iso == layer.isolated_area.end() ? 0 : iso->second;
    ann.visible_fraction =
        isolated == 0 ? 1.0 : std::min(1.0, static_cast<double>(area) / static_cast<double>(isolated));
    out.push_back(std::move(ann));
  }
  return out;
}

std::vector<InstanceAnnotation> update_real_masks(std::span<const InstanceAnnotation> real,
                                                  const RenderLayer& layer) {
  std::vector<InstanceAnnotation> out;
  for (const InstanceAnnotation& ann : real) {
    if (ann.origin != InstanceOrigin::real)
      throw Error(ErrorCode::InvalidArgument, "update_real_masks expects real annotations");
    BinaryMask mask = ann.mask.decode();
    if (!mask.same_shape(layer.color))
      throw Error(ErrorCode::DimensionMismatch, "real mask size differs from the layer");
    bool any = false;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i] && layer.color[i][3] >= kMaskAlpha) mask[i] = 0;
      any = any || mask[i] != 0;
    }
    if (!any) continue;
    InstanceAnnotation updated = ann;
    updated.mask = RleMask::encode(mask);
    updated.bbox = tight_bbox(mask);
    out.push_back(std::move(updated));
  }
  return out;
}

ImageRgb8 resize_cover(const ImageRgb8& image, int width, int height) {
  if (image.empty()) throw Error(ErrorCode::InvalidArgument, "cannot resize an empty image");
  if (image.same_shape(width, height)) return image;
  const double scale = std::max(static_cast<double>(width) / image.width(),
                                static_cast<double>(height) / image.height());
  const double off_x = 0.5 * (image.width() - width / scale);
  const double off_y = 0.5 * (image.height() - height / scale);
  ImageRgb8 out(width, height);
  for (int y = 0; y < height; ++y) {
    const double sy = std::clamp(off_y + (y + 0.5) / scale - 0.5, 0.0, image.height() - 1.0);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double fy = sy - y0;
    for (int x = 0; x < width; ++x) {
      const double sx = std::clamp(off_x + (x + 0.5) / scale - 0.5, 0.0, image.width() - 1.0);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double fx = sx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = image(x0, y0)[c] * (1.0 - fx) + image(x1, y0)[c] * fx;
        const double bottom = image(x0, y1)[c] * (1.0 - fx) + image(x1, y1)[c] * fx;
        out(x, y)[c] = static_cast<std::uint8_t>(
            std::clamp(std::floor(top * (1.0 - fy) + bottom * fy + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

ImageRgb8 resolve_background(BackgroundMode mode, const ImageRgb8* real_image,
                             std::span<const std::filesystem::path> pool, Rng& rng, int width,
                             int height, const ImageLoader& load) {
  switch (mode) {
    case BackgroundMode::real:
      if (!real_image) throw Error(ErrorCode::MissingRealImage, "background mode 'real' needs the rig image");
      if (!real_image->same_shape(width, height))
        throw Error(ErrorCode::DimensionMismatch, "rig image size differs from calibration");
      return *real_image;
    case BackgroundMode::black:
      return ImageRgb8(width, height, Rgb8{0, 0, 0});
    case BackgroundMode::random_image:
    case BackgroundMode::synthetic_proxy:
      if (pool.empty()) throw Error(ErrorCode::EmptyPool, "background pool is empty");
      return resize_cover(load(pool[rng.index(pool.size())]), width, height);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown background mode");
}

std::string_view to_string(InstanceOrigin origin) {
  return origin == InstanceOrigin::real ? "real" : "synthetic";
}

std::string_view to_string(BackgroundMode mode) {
  switch (mode) {
    case BackgroundMode::real: return "real";
    case BackgroundMode::black: return "black";
    case BackgroundMode::random_image: return "random_image";
    case BackgroundMode::synthetic_proxy: return "synthetic_proxy";
  }
  return "real";
}

json annotations_to_json(const std::string& image, std::span<const InstanceAnnotation> annotations) {
  json instances = json::array();
  for (const InstanceAnnotation& a : annotations) {
    instances.push_back({{"id", a.instance_id},
                         {"origin", to_string(a.origin)},
                         {"category", a.category},
                         {"bbox", {a.bbox.x, a.bbox.y, a.bbox.width, a.bbox.height}},
                         {"rle", to_json(a.mask)},
                         {"visible_fraction", a.visible_fraction}});
  }
  return json{{"image", image}, {"instances", instances}};
}

std::vector<InstanceAnnotation> annotations_from_json(const json& j) {
  std::vector<InstanceAnnotation> out;
  for (const json& item : j.at("instances")) {
    InstanceAnnotation a;
    a.instance_id = item.at("id").get<std::uint32_t>();
    const std::string origin = item.at("origin").get<std::string>();
    if (origin == "real") a.origin = InstanceOrigin::real;
    else if (origin == "synthetic") a.origin = InstanceOrigin::synthetic;
    else throw Error(ErrorCode::InvalidArgument, "unknown instance origin '" + origin + "'");
    a.category = item.value("category", std::string("car"));
    a.mask = rle_from_json(item.at("rle"));
    a.bbox = tight_bbox(a.mask.decode());
    a.visible_fraction = item.value("visible_fraction", 1.0);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<InstanceAnnotation> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open annotations " + path.string());
  try {
    return annotations_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace augmentor
