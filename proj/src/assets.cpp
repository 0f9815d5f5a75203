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

#include "augmentor/assets.hpp"

#include "augmentor/error.hpp"
#include "augmentor/placement.hpp"

#include <json.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace augmentor {

using json = nlohmann::json;

std::array<Vec3, 2> TriangleMesh::bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo(inf, inf, inf);
  Vec3 hi(-inf, -inf, -inf);
  for (const Vec3& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

std::string_view to_string(CarCategory c) {
  switch (c) {
    case CarCategory::suv: return "SUV";
    case CarCategory::sedan: return "sedan";
    case CarCategory::hatchback: return "hatchback";
    case CarCategory::station_wagon: return "station-wagon";
    case CarCategory::mini_van: return "mini-van";
    case CarCategory::van: return "van";
    case CarCategory::other: return "other";
  }
  return "other";
}

CarCategory parse_category(std::string_view name) {
  for (CarCategory c : {CarCategory::suv, CarCategory::sedan, CarCategory::hatchback,
                        CarCategory::station_wagon, CarCategory::mini_van, CarCategory::van,
                        CarCategory::other}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown car category '" + std::string(name) + "'");
}

void Material::validate() const {
  for (double c : base_color)
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidArgument, "base color out of [0,1]");
  if (!(specular_weight >= 0.0 && specular_weight <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "specular weight out of [0,1]");
}

void Catalog::validate() const {
  if (models.empty()) throw Error(ErrorCode::InvalidArgument, "catalog has no models");
  if (palette.empty()) throw Error(ErrorCode::InvalidArgument, "catalog palette is empty");
  for (const auto& m : models)
    if (!m || m->mesh.empty()) throw Error(ErrorCode::EmptyMesh, "catalog model has no triangles");
  for (const RgbF& c : palette) Material{c, specular_weight, finish}.validate();
}

Vec2 rotate_yaw(const Vec2& v, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {v.x() * c + v.y() * s, -v.x() * s + v.y() * c};
}

std::array<Vec2, 4> Footprint::corners() const {
  const Vec2 ax = rotate_yaw(Vec2(half_extent.x(), 0.0), yaw);
  const Vec2 az = rotate_yaw(Vec2(0.0, half_extent.y()), yaw);
  return {center - ax - az, center + ax - az, center + ax + az, center - ax + az};
}

bool Footprint::intersects(const Footprint& other) const {
  constexpr double eps = 1e-9;
  const auto a = corners();
  const auto b = other.corners();
  const std::array<Vec2, 4> axes = {rotate_yaw(Vec2::UnitX(), yaw), rotate_yaw(Vec2::UnitY(), yaw),
                                    rotate_yaw(Vec2::UnitX(), other.yaw),
                                    rotate_yaw(Vec2::UnitY(), other.yaw)};
  for (const Vec2& axis : axes) {
    double a_lo = std::numeric_limits<double>::infinity(), a_hi = -a_lo;
    double b_lo = a_lo, b_hi = -a_lo;
    for (int i = 0; i < 4; ++i) {
      const double pa = a[i].dot(axis);
      const double pb = b[i].dot(axis);
      a_lo = std::min(a_lo, pa);
      a_hi = std::max(a_hi, pa);
      b_lo = std::min(b_lo, pb);
      b_hi = std::max(b_hi, pb);
    }
    if (a_hi <= b_lo + eps || b_hi <= a_lo + eps) return false;
  }
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw Error(ErrorCode::MalformedRecord, "bad number '" + std::string(tok) + "' on line " + std::to_string(line), line);
  return v;
}

long parse_index(std::string_view tok, std::size_t line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0)
    throw Error(ErrorCode::MalformedRecord, "bad index '" + std::string(tok) + "' on line " + std::to_string(line), line);
  return v;
}

struct FaceCorner {
  long vertex = 0;
  std::optional<long> normal;
};

struct RawFace {
  std::vector<FaceCorner> corners;
  std::size_t line = 0;
};

// OBJ indices are 1-based; negatives count back from the current end.
std::uint32_t resolve_index(long idx, std::size_t count, std::size_t line) {
  long resolved = idx > 0 ? idx - 1 : static_cast<long>(count) + idx;
  if (resolved < 0 || static_cast<std::size_t>(resolved) >= count)
    throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(idx) + " out of range on line " + std::to_string(line), line);
  return static_cast<std::uint32_t>(resolved);
}

}  // namespace

TriangleMesh parse_obj(std::string_view text) {
  TriangleMesh mesh;
  std::vector<RawFace> faces;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto tokens = split_ws(line);
    const std::string_view tag = tokens[0];
    if (tag == "v") {
      // Optional w / vertex colors after xyz are ignored.
      if (tokens.size() < 4)
        throw Error(ErrorCode::MalformedRecord, "vertex needs 3 coordinates on line " + std::to_string(line_no), line_no);
      mesh.vertices.emplace_back(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                                 parse_double(tokens[3], line_no));
    } else if (tag == "vn") {
      if (tokens.size() != 4)
        throw Error(ErrorCode::MalformedRecord, "normal needs 3 coordinates on line " + std::to_string(line_no), line_no);
      Vec3 n(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no), parse_double(tokens[3], line_no));
      if (n.norm() < 1e-12)
        throw Error(ErrorCode::MalformedRecord, "zero-length normal on line " + std::to_string(line_no), line_no);
      mesh.normals.push_back(n.normalized());
    } else if (tag == "f") {
      if (tokens.size() < 4)
        throw Error(ErrorCode::MalformedRecord, "face needs at least 3 vertices on line " + std::to_string(line_no), line_no);
      RawFace face;
      face.line = line_no;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string_view tok = tokens[i];
        const auto s1 = tok.find('/');
        FaceCorner corner;
        corner.vertex = parse_index(tok.substr(0, s1), line_no);
        if (s1 != std::string_view::npos) {
          const auto s2 = tok.find('/', s1 + 1);
          if (s2 != std::string_view::npos && s2 + 1 < tok.size())
            corner.normal = parse_index(tok.substr(s2 + 1), line_no);
        }
        // Negative indices are relative to what has been read so far.
        if (corner.vertex < 0)
          corner.vertex = static_cast<long>(resolve_index(corner.vertex, mesh.vertices.size(), line_no)) + 1;
        if (corner.normal && *corner.normal < 0)
          corner.normal = static_cast<long>(resolve_index(*corner.normal, mesh.normals.size(), line_no)) + 1;
        face.corners.push_back(corner);
      }
      faces.push_back(std::move(face));
    }
  }

  for (const RawFace& face : faces) {
    std::vector<std::uint32_t> v;
    std::vector<std::optional<std::uint32_t>> n;
    bool all_normals = true;
    for (const FaceCorner& c : face.corners) {
      v.push_back(resolve_index(c.vertex, mesh.vertices.size(), face.line));
      if (c.normal) n.emplace_back(resolve_index(*c.normal, mesh.normals.size(), face.line));
      else {
        n.emplace_back();
        all_normals = false;
      }
    }
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      MeshTriangle tri;
      tri.vertex = {v[0], v[i], v[i + 1]};
      if (all_normals) {
        tri.normal = {*n[0], *n[i], *n[i + 1]};
      } else {
        const Vec3& a = mesh.vertices[tri.vertex[0]];
        Vec3 fn = (mesh.vertices[tri.vertex[1]] - a).cross(mesh.vertices[tri.vertex[2]] - a);
        fn = fn.norm() > 0.0 ? Vec3(fn.normalized()) : Vec3(Vec3::UnitY());
        const auto idx = static_cast<std::uint32_t>(mesh.normals.size());
        mesh.normals.push_back(fn);
        tri.normal = {idx, idx, idx};
      }
      mesh.triangles.push_back(tri);
    }
  }

  if (mesh.triangles.empty()) throw Error(ErrorCode::EmptyMesh, "mesh has no faces");
  normalize_mesh(mesh);
  return mesh;
}

void normalize_mesh(TriangleMesh& mesh) {
  if (mesh.vertices.empty()) return;
  Vec3 centroid = Vec3::Zero();
  double min_y = std::numeric_limits<double>::infinity();
  for (const Vec3& v : mesh.vertices) {
    centroid += v;
    min_y = std::min(min_y, v.y());
  }
  centroid /= static_cast<double>(mesh.vertices.size());
  const Vec3 shift(-centroid.x(), -min_y, -centroid.z());
  for (Vec3& v : mesh.vertices) v += shift;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open mesh " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_obj(ss.str());
}

std::string serialize_obj(const TriangleMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const Vec3& n : mesh.normals) out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n';
  for (const MeshTriangle& t : mesh.triangles) {
    out << 'f';
    for (int i = 0; i < 3; ++i) out << ' ' << t.vertex[i] + 1 << "//" << t.normal[i] + 1;
    out << '\n';
  }
  return out.str();
}

namespace {

RgbF parse_rgb(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::InvalidArgument, "color must be [r,g,b]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Finish parse_finish(const std::string& s) {
  if (s == "mirror") return Finish::mirror;
  if (s == "diffuse-only") return Finish::diffuse_only;
  throw Error(ErrorCode::InvalidArgument, "unknown finish '" + s + "'");
}

}  // namespace

Catalog load_catalog(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::Io, "cannot open catalog " + manifest.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, manifest.string() + ": " + e.what());
  }
  const auto base = manifest.parent_path();
  Catalog catalog;
  try {
    for (const json& m : j.at("models")) {
      auto model = std::make_shared<CarModel>();
      const std::filesystem::path rel = m.at("path").get<std::string>();
      model->mesh = load_obj(rel.is_absolute() ? rel : base / rel);
      model->category = parse_category(m.value("category", std::string("other")));
      model->name = m.value("name", rel.stem().string());
      catalog.models.push_back(std::move(model));
    }
    for (const json& c : j.at("palette")) catalog.palette.push_back(parse_rgb(c));
    catalog.specular_weight = j.value("specular_weight", 1.0);
    catalog.finish = parse_finish(j.value("finish", std::string("mirror")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, manifest.string() + ": " + e.what());
  }
  catalog.validate();
  return catalog;
}

CatalogDraw catalog_sample(const Catalog& catalog, Rng& rng) {
  CatalogDraw draw;
  draw.model = catalog.models[rng.index(catalog.models.size())];
  draw.material.base_color = catalog.palette[rng.index(catalog.palette.size())];
  draw.material.specular_weight = catalog.specular_weight;
  draw.material.finish = catalog.finish;
  return draw;
}

Footprint footprint(const CarModel& model, const PoseSample& pose, const GroundPlane& plane) {
  if (pose.kind != PoseKind::on_plane)
    throw Error(ErrorCode::OffPlanePose, "footprint needs an on-plane pose");
  const auto [lo, hi] = model.mesh.bounds();
  const Vec2 local_center(0.5 * (lo.x() + hi.x()), 0.5 * (lo.z() + hi.z()));
  Footprint fp;
  fp.half_extent = {0.5 * (hi.x() - lo.x()), 0.5 * (hi.z() - lo.z())};
  fp.yaw = pose.yaw;
  fp.center = plane.plane_coords(pose.position) + rotate_yaw(local_center, pose.yaw);
  return fp;
}

}  // namespace augmentor
