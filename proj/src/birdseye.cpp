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

#include "augmentor/birdseye.hpp"

#include "augmentor/error.hpp"

#include <fstream>

namespace augmentor {

using json = nlohmann::json;

Vec2 BirdseyeMeta::pixel_to_ground(const Vec2& pixel) const {
  return {extent.min_x + pixel.x() * meters_per_pixel, extent.min_z + pixel.y() * meters_per_pixel};
}

Vec2 BirdseyeMeta::ground_to_pixel(const Vec2& ground) const {
  return {(ground.x() - extent.min_x) / meters_per_pixel, (ground.y() - extent.min_z) / meters_per_pixel};
}

json birdseye_meta_to_json(const BirdseyeMeta& m) {
  return json{{"rig_id", m.rig_id},
              {"image", m.image},
              {"meters_per_pixel", m.meters_per_pixel},
              {"extent",
               {{"min_x", m.extent.min_x},
                {"max_x", m.extent.max_x},
                {"min_z", m.extent.min_z},
                {"max_z", m.extent.max_z}}},
              {"origin", {m.extent.min_x, m.extent.min_z}},
              {"size", {m.width, m.height}}};
}

BirdseyeMeta birdseye_meta_from_json(const json& j) {
  BirdseyeMeta m;
  try {
    m.rig_id = j.at("rig_id").get<std::string>();
    m.image = j.at("image").get<std::string>();
    m.meters_per_pixel = j.at("meters_per_pixel").get<double>();
    const json& e = j.at("extent");
    m.extent = {e.at("min_x").get<double>(), e.at("max_x").get<double>(), e.at("min_z").get<double>(),
                e.at("max_z").get<double>()};
    const auto size = j.at("size").get<std::vector<int>>();
    if (size.size() != 2) throw Error(ErrorCode::ParseError, "birdseye metadata: size needs 2 entries");
    m.width = size[0];
    m.height = size[1];
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("birdseye metadata: ") + e.what());
  }
  const auto expected = birdseye_size(m.extent, m.meters_per_pixel);
  if (expected[0] != m.width || expected[1] != m.height)
    throw Error(ErrorCode::RangeViolation, "birdseye metadata: size disagrees with extent and scale");
  return m;
}

BirdseyeMeta export_birdseye(const CameraRig& rig, double meters_per_pixel, const GroundRect& extent,
                             const std::filesystem::path& out_dir) {
  const auto [w, h] = birdseye_size(extent, meters_per_pixel);
  const Homography hom = ground_homography(rig.calibration.intrinsics, rig.calibration.plane);
  const ImageRgb8 source = read_rgb8(rig.image);
  if (!source.same_shape(rig.calibration.intrinsics.width, rig.calibration.intrinsics.height))
    throw Error(ErrorCode::DimensionMismatch, "rig " + rig.id + ": image size differs from calibration");
  const ImageRgb8 top = warp_birdseye(source, hom, meters_per_pixel, extent);

  BirdseyeMeta meta;
  meta.rig_id = rig.id;
  meta.image = rig.id + "_birdseye.png";
  meta.meters_per_pixel = meters_per_pixel;
  meta.extent = extent;
  meta.width = w;
  meta.height = h;

  std::filesystem::create_directories(out_dir);
  write_png(out_dir / meta.image, top);
  std::ofstream out(out_dir / (rig.id + "_birdseye.json"), std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write birdseye metadata in " + out_dir.string());
  out << birdseye_meta_to_json(meta).dump(2) << "\n";
  return meta;
}

TrajectorySet trajectories_from_pixels(const BirdseyeMeta& meta,
                                       const std::vector<std::vector<Vec2>>& pixel_polylines) {
  TrajectorySet set;
  set.source = meta.rig_id;
  for (const auto& line : pixel_polylines) {
    std::vector<Vec2> ground;
    for (const Vec2& p : line) ground.push_back(meta.pixel_to_ground(p));
    set.polylines.push_back(std::move(ground));
  }
  set.validate();
  return set;
}

json trajectories_to_json(const TrajectorySet& set, const BirdseyeMeta& meta) {
  json lines = json::array();
  for (const auto& line : set.polylines) {
    json pts = json::array();
    for (const Vec2& p : line) pts.push_back({p.x(), p.y()});
    lines.push_back(std::move(pts));
  }
  return json{{"rig_id", meta.rig_id},
              {"meters_per_pixel", meta.meters_per_pixel},
              {"extent",
               {{"min_x", meta.extent.min_x},
                {"max_x", meta.extent.max_x},
                {"min_z", meta.extent.min_z},
                {"max_z", meta.extent.max_z}}},
              {"polylines", std::move(lines)}};
}

}  // namespace augmentor
