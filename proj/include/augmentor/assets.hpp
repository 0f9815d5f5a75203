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
#include "augmentor/rng.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace augmentor {

struct PoseSample;

struct MeshTriangle {
  std::array<std::uint32_t, 3> vertex{};
  std::array<std::uint32_t, 3> normal{};
};

/// Model frame: x right, y up, z forward, meters; origin on the ground
/// under the vertex centroid.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<MeshTriangle> triangles;

  bool empty() const noexcept { return triangles.empty(); }
  /// Model-frame bounds: {min, max}.
  std::array<Vec3, 2> bounds() const;
};

enum class CarCategory { suv, sedan, hatchback, station_wagon, mini_van, van, other };

std::string_view to_string(CarCategory c);
CarCategory parse_category(std::string_view name);

struct CarModel {
  TriangleMesh mesh;
  CarCategory category = CarCategory::other;
  std::string name;
};

enum class Finish { mirror, diffuse_only };

struct Material {
  RgbF base_color{0.5, 0.5, 0.5};
  double specular_weight = 1.0;
  Finish finish = Finish::mirror;

  void validate() const;
};

struct Catalog {
  std::vector<std::shared_ptr<const CarModel>> models;
  std::vector<RgbF> palette;
  double specular_weight = 1.0;
  Finish finish = Finish::mirror;

  void validate() const;
};

struct CatalogDraw {
  std::shared_ptr<const CarModel> model;
  Material material;
};

/// Oriented rectangle on the ground plane (plane coordinates, meters).
struct Footprint {
  Vec2 center = Vec2::Zero();
  Vec2 half_extent = Vec2::Zero();
  double yaw = 0.0;

  std::array<Vec2, 4> corners() const;
  /// True when the interiors overlap; touching edges do not count.
  bool intersects(const Footprint& other) const;
};

/// Rotates a model-frame (x, z) offset into plane coordinates: yaw 0 keeps
/// model forward along +z, yaw pi/2 turns it toward +x.
Vec2 rotate_yaw(const Vec2& v, double yaw);

/// Parses the `v` / `vn` / `f` subset of Wavefront OBJ. Other records are
/// ignored. Faces are fan-triangulated; faces without normals get a computed
/// face normal. The result is normalized to the model frame.
TriangleMesh parse_obj(std::string_view text);
TriangleMesh load_obj(const std::filesystem::path& path);
std::string serialize_obj(const TriangleMesh& mesh);
/// Translates so min y = 0 and the vertex centroid has x = z = 0.
void normalize_mesh(TriangleMesh& mesh);

/// Catalog manifest: {"models": [{"path", "category", "name"?}], "palette": [[r,g,b], ...],
/// "specular_weight"?, "finish"?}. Paths are relative to the manifest.
Catalog load_catalog(const std::filesystem::path& manifest);

CatalogDraw catalog_sample(const Catalog& catalog, Rng& rng);

Footprint footprint(const CarModel& model, const PoseSample& pose, const GroundPlane& plane);

}  // namespace augmentor
