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

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace augmentor {

struct DatasetStats {
  std::size_t composites = 0;
  /// Real instances still visible in the composites.
  std::size_t real_instances = 0;
  /// Cars placed (after collision filtering), from the manifest.
  std::size_t synthetic_instances = 0;
  /// Synthetic instances with a non-empty mask in the annotations.
  std::size_t visible_synthetic_instances = 0;
  /// Real mask pixels removed by the synthetic overlay.
  std::uint64_t covered_real_pixels = 0;
  /// Cars per composite -> number of composites.
  std::map<int, std::size_t> cars_per_composite;
  /// Ten equal bins over [0, 1]; 1.0 lands in the last bin.
  std::array<std::size_t, 10> visible_fraction{};

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

/// Reads the manifest plus every annotation file it references. Throws
/// CorruptManifest when anything is missing or malformed.
DatasetStats compute_stats(const std::filesystem::path& manifest_path);

nlohmann::json stats_to_json(const DatasetStats& stats);
std::string stats_table(const DatasetStats& stats);

}  // namespace augmentor
