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
#include "augmentor/config.hpp"
#include "augmentor/placement.hpp"
#include "augmentor/renderer.hpp"
#include "augmentor/rig.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace augmentor {

struct PlacementRecord {
  std::uint32_t instance_id = 0;
  std::string model;
  CarCategory category = CarCategory::other;
  Material material;
  PoseSample pose;
};

struct CompositeRecord {
  std::size_t rig_index = 0;
  std::string rig_id;
  int augmentation = 0;
  std::uint64_t seed = 0;
  /// Cars drawn before collision filtering.
  int cars_requested = 0;
  std::vector<PlacementRecord> placements;
  /// Relative to the manifest directory.
  std::string image_file;
  std::string annotation_file;
  std::string source_image;
  std::optional<std::string> source_annotations;
};

struct AugmentationManifest {
  std::string config_fingerprint;
  nlohmann::json config;
  std::vector<CompositeRecord> composites;

  std::size_t synthetic_instances() const;
};

nlohmann::json manifest_to_json(const AugmentationManifest& manifest);
/// Throws CorruptManifest on missing or mistyped fields.
AugmentationManifest manifest_from_json(const nlohmann::json& j);
AugmentationManifest load_manifest(const std::filesystem::path& path);

/// Per-composite seed; depends only on (root seed, rig index, augmentation).
std::uint64_t composite_seed(std::uint64_t seed, std::size_t rig_index, int augmentation);

/// Cars requested for one composite before collision filtering.
int draw_car_count(const AugmentationConfig& config, Rng& rng);

/// Renders every (rig, augmentation) composite into config.output_dir and
/// writes manifest.json there. `jobs` only changes speed.
AugmentationManifest augment_dataset(const AugmentationConfig& config,
                                     const std::vector<CameraRig>& rigs, int jobs = 1);

struct DebugRender {
  CompositeRecord record;
  /// Renderer output before post-processing.
  RenderLayer raw;
  RenderLayer layer;
  ImageRgb8 composite;
  nlohmann::json annotations;
};

/// Rebuilds one composite exactly as augment_dataset would, without writing
/// anything, and keeps the intermediate buffers.
DebugRender render_debug(const AugmentationConfig& config, const std::vector<CameraRig>& rigs,
                         std::size_t rig_index, int augmentation, int threads = 1);

/// Worker count from AUGMENTOR_THREADS, or 1.
int default_jobs();

}  // namespace augmentor
