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

#include "fixtures.hpp"

#include "augmentor/placement.hpp"
#include "augmentor/rle.hpp"
#include "augmentor/rng.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace fixtures {

using namespace augmentor;
using json = nlohmann::json;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2)); }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Emits a convex polytope given as a list of planar faces, winding each face
// counter-clockwise as seen from outside.
std::string polytope_obj(const std::vector<Vec3>& verts, std::vector<std::vector<int>> faces) {
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& v : verts) centroid += v;
  centroid /= static_cast<double>(verts.size());
  std::ostringstream out;
  out.precision(17);
  for (const Vec3& v : verts) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (auto& f : faces) {
    Vec3 fc = Vec3::Zero();
    for (int i : f) fc += verts[i];
    fc /= static_cast<double>(f.size());
    const Vec3 n = (verts[f[1]] - verts[f[0]]).cross(verts[f[2]] - verts[f[0]]);
    if (n.dot(fc - centroid) < 0) std::reverse(f.begin(), f.end());
    out << "f";
    for (int i : f) out << " " << i + 1;
    out << "\n";
  }
  return out.str();
}

// Extrudes a convex (z, y) profile along x.
std::string prism_obj(const std::vector<Vec2>& profile, double width) {
  std::vector<Vec3> verts;
  const int n = static_cast<int>(profile.size());
  for (double x : {-0.5 * width, 0.5 * width})
    for (const Vec2& p : profile) verts.emplace_back(x, p.y(), p.x());
  std::vector<std::vector<int>> faces;
  std::vector<int> left, right;
  for (int i = 0; i < n; ++i) {
    left.push_back(i);
    right.push_back(n + i);
  }
  faces.push_back(left);
  faces.push_back(right);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    faces.push_back({i, j, n + j, n + i});
  }
  return polytope_obj(verts, faces);
}

}  // namespace

std::string box_obj(double width, double height, double length) {
  return prism_obj({{-0.5 * length, 0.0}, {0.5 * length, 0.0}, {0.5 * length, height}, {-0.5 * length, height}},
                   width);
}

std::string convex_car_obj(double width, double height, double length) {
  const double l = 0.5 * length;
  // Bumper-to-bumper profile with sloped hood and rear window; convex.
  return prism_obj({{-l, 0.0},
                    {l, 0.0},
                    {l, 0.45 * height},
                    {0.55 * l, 0.65 * height},
                    {0.15 * l, height},
                    {-0.5 * l, height},
                    {-l, 0.6 * height}},
                   width);
}

std::string triangle_obj() { return "v -1 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"; }

std::shared_ptr<const CarModel> model_from_obj(const std::string& obj, CarCategory category,
                                               const std::string& name) {
  auto m = std::make_shared<CarModel>();
  m->mesh = parse_obj(obj);
  m->category = category;
  m->name = name;
  return m;
}

CameraIntrinsics intrinsics(int width, int height, double focal) {
  CameraIntrinsics k;
  k.focal_x = focal;
  k.focal_y = focal;
  k.center_x = 0.5 * (width - 1);
  k.center_y = 0.5 * (height - 1);
  k.width = width;
  k.height = height;
  return k;
}

CameraCalibration calibration(int width, int height, double focal, double camera_height) {
  return {intrinsics(width, height, focal), GroundPlane::from_height(camera_height)};
}

ImageRgb8 pattern_image(int width, int height, std::uint32_t salt) {
  ImageRgb8 img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::uint64_t h = mix64((static_cast<std::uint64_t>(salt) << 40) ^ (static_cast<std::uint64_t>(y) << 20) ^ x);
      const int base = y < height / 2 ? 150 : 80;
      img(x, y) = {static_cast<std::uint8_t>(base + (h & 63)), static_cast<std::uint8_t>(base + ((h >> 8) & 63)),
                   static_cast<std::uint8_t>(base + 20 + ((h >> 16) & 31))};
    }
  return img;
}

ImageRgb8 sky_panorama(int height, std::uint32_t salt) {
  ImageRgb8 img(2 * height, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < 2 * height; ++x) {
      const double v = static_cast<double>(y) / height;
      const int tint = static_cast<int>((salt * 37 + x * 3) % 40);
      if (v < 0.5)
        img(x, y) = {static_cast<std::uint8_t>(120 + tint), static_cast<std::uint8_t>(170 + tint / 2), 230};
      else
        img(x, y) = {static_cast<std::uint8_t>(70 + tint), 70, 65};
    }
  return img;
}

SceneInstance instance_at(std::shared_ptr<const CarModel> model, const GroundPlane& plane, double x,
                          double z, double yaw, std::uint32_t id, RgbF color) {
  SceneInstance inst;
  inst.model = std::move(model);
  inst.material.base_color = color;
  inst.material.specular_weight = 0.0;
  inst.material.finish = Finish::diffuse_only;
  inst.pose = PoseSample::on_plane(plane, Vec2(x, z), yaw);
  inst.instance_id = id;
  return inst;
}

BinaryMask rect_mask(int width, int height, int x0, int y0, int w, int h) {
  BinaryMask m(width, height, 0);
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x)
      if (m.contains(x, y)) m(x, y) = 1;
  return m;
}

Dataset make_dataset(const std::filesystem::path& root, const DatasetOptions& o) {
  Dataset d;
  d.root = root;
  std::filesystem::create_directories(root / "models");
  write_text(root / "models" / "hatch.obj", convex_car_obj(1.8, 1.5, 4.2));
  write_text(root / "models" / "van.obj", box_obj(2.0, 2.2, 5.0));
  write_json(root / "catalog.json",
             {{"models",
               {{{"path", "models/hatch.obj"}, {"category", "hatchback"}, {"name", "hatch"}},
                {{"path", "models/van.obj"}, {"category", "van"}, {"name", "van"}}}},
              {"palette", {{0.7, 0.1, 0.1}, {0.1, 0.2, 0.6}, {0.8, 0.8, 0.8}, {0.05, 0.05, 0.05}}}});

  const double focal = 0.625 * o.width;
  json rigs = json::array();
  for (int r = 0; r < o.rigs; ++r) {
    const std::string id = "rig" + std::to_string(r);
    const auto calib = calibration(o.width, o.height, focal, 1.6);
    write_png(root / (id + ".png"), pattern_image(o.width, o.height, static_cast<std::uint32_t>(r)));
    write_png(root / (id + "_env.png"), sky_panorama(16, static_cast<std::uint32_t>(r)));
    write_json(root / (id + "_traj.json"),
               {{"meters_per_pixel", 0.1},
                {"extent", {{"min_x", -20}, {"max_x", 20}, {"min_z", 4}, {"max_z", 64}}},
                {"polylines", {{{-1.8, 7.0}, {-1.8, 30.0}}, {{2.2, 8.0}, {2.0, 20.0}, {2.6, 34.0}}}}});
    BinaryMask road(o.width, o.height, 0);
    for (int y = o.height * 9 / 16; y < o.height; ++y)
      for (int x = 0; x < o.width; ++x) road(x, y) = 255;
    write_png(root / (id + "_road.png"), road);

    json rig{{"id", id},
             {"image", id + ".png"},
             {"calibration",
              {{"focal", {focal, focal}},
               {"center", {calib.intrinsics.center_x, calib.intrinsics.center_y}},
               {"size", {o.width, o.height}},
               {"plane", {{"normal", {0, -1, 0}}, {"offset", -1.6}}}}},
             {"env_map", id + "_env.png"},
             {"trajectories", id + "_traj.json"},
             {"road_mask", id + "_road.png"}};
    if (o.real_annotations) {
      // Two parked "real" cars near the lanes.
      std::vector<InstanceAnnotation> real;
      const int cx = o.width / 2;
      const int cy = o.height * 5 / 8;
      for (int i = 0; i < 2; ++i) {
        InstanceAnnotation a;
        a.instance_id = static_cast<std::uint32_t>(i + 1);
        a.origin = InstanceOrigin::real;
        a.category = "sedan";
        const int w = o.width / 8, h = o.height / 8;
        const int x0 = i == 0 ? cx - o.width / 6 : cx + o.width / 20;
        const BinaryMask m = rect_mask(o.width, o.height, x0, cy - h, w, h);
        a.mask = RleMask::encode(m);
        a.bbox = tight_bbox(m);
        real.push_back(a);
      }
      write_json(root / (id + "_ann.json"), annotations_to_json(id + ".png", real));
      rig["annotations"] = id + "_ann.json";
    }
    rigs.push_back(rig);
  }
  d.rigs = root / "rigs.json";
  write_json(d.rigs, rigs);

  d.config_json = {{"augmentations_per_image", o.augmentations},
                   {"max_cars", o.max_cars},
                   {"cars_mode", o.cars_mode},
                   {"placement_strategy", o.strategy},
                   {"env_mode", o.env_mode},
                   {"seed", o.seed},
                   {"catalog", "catalog.json"},
                   {"output_dir", "out"},
                   {"render",
                    {{"samples_per_pixel", o.spp},
                     {"diffuse_env_samples", o.diffuse},
                     {"shadow_samples", o.shadow}}}};
  d.config = root / "config.json";
  write_json(d.config, d.config_json);
  return d;
}

void patch_config(Dataset& dataset, const json& overrides) {
  dataset.config_json.merge_patch(overrides);
  write_json(dataset.config, dataset.config_json);
}

}  // namespace fixtures
