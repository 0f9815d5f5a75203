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
#include "augmentor/bvh.hpp"
#include "augmentor/compositor.hpp"
#include "augmentor/geometry.hpp"
#include "augmentor/image.hpp"
#include "augmentor/renderer.hpp"

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace fixtures {

using augmentor::Vec2;
using augmentor::Vec3;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "augmentor");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Axis-aligned box, x in [-w/2, w/2], y in [0, h], z in [-l/2, l/2].
std::string box_obj(double width, double height, double length);
/// Convex car-like prism: a convex side profile extruded along x.
std::string convex_car_obj(double width = 1.8, double height = 1.5, double length = 4.2);
/// One-triangle mesh for tie-break tests.
std::string triangle_obj();

std::shared_ptr<const augmentor::CarModel> model_from_obj(
    const std::string& obj, augmentor::CarCategory category = augmentor::CarCategory::sedan,
    const std::string& name = "car");

augmentor::CameraIntrinsics intrinsics(int width, int height, double focal);
augmentor::CameraCalibration calibration(int width, int height, double focal, double camera_height);

/// Deterministic textured background.
augmentor::ImageRgb8 pattern_image(int width, int height, std::uint32_t salt = 0);
/// Sky-over-ground panorama, width = 2 * height.
augmentor::ImageRgb8 sky_panorama(int height, std::uint32_t salt = 0);

augmentor::SceneInstance instance_at(std::shared_ptr<const augmentor::CarModel> model,
                                     const augmentor::GroundPlane& plane, double x, double z,
                                     double yaw, std::uint32_t id,
                                     augmentor::RgbF color = {0.6, 0.1, 0.1});

/// Binary mask with a filled axis-aligned rectangle.
augmentor::BinaryMask rect_mask(int width, int height, int x0, int y0, int w, int h);

struct DatasetOptions {
  int rigs = 2;
  int width = 160;
  int height = 80;
  int augmentations = 2;
  int max_cars = 3;
  std::uint64_t seed = 7;
  int spp = 2;
  int diffuse = 8;
  int shadow = 4;
  bool real_annotations = true;
  std::string strategy = "manual";
  std::string env_mode = "true_map";
  std::string cars_mode = "uniform";
};

/// A self-contained dataset on disk: catalog, rigs with images, panoramas,
/// trajectories, road masks and real annotations, plus a config file.
struct Dataset {
  std::filesystem::path root;
  std::filesystem::path rigs;
  std::filesystem::path config;
  nlohmann::json config_json;
};

Dataset make_dataset(const std::filesystem::path& root, const DatasetOptions& options);

/// Rewrites the config with the given overrides merged in.
void patch_config(Dataset& dataset, const nlohmann::json& overrides);

/// Byte content of a file.
std::string slurp(const std::filesystem::path& path);

}  // namespace fixtures
