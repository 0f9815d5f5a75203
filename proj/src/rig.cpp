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

#include "augmentor/rig.hpp"

#include "augmentor/error.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace augmentor {

using json = nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorCode::UnknownKey, where + ": unknown key '" + key + "'");
  }
}

template <std::size_t N>
std::array<double, N> fixed_array(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != N)
    throw Error(ErrorCode::ParseError, where + ": '" + key + "' must be an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!(*it)[i].is_number()) throw Error(ErrorCode::ParseError, where + ": '" + key + "' must hold numbers");
    out[i] = (*it)[i].get<double>();
  }
  return out;
}

std::filesystem::path existing(const std::filesystem::path& base, const std::string& p,
                               const std::string& where) {
  std::filesystem::path path(p);
  if (!path.is_absolute()) path = base / path;
  path = path.lexically_normal();
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, where + ": missing file " + path.string());
  return path;
}

}  // namespace

CameraCalibration parse_calibration(const json& j) {
  const std::string where = "calibration";
  if (!j.is_object()) throw Error(ErrorCode::ParseError, where + ": expected an object");
  reject_unknown(j, {"focal", "center", "size", "plane"}, where);
  const auto focal = fixed_array<2>(j, "focal", where);
  const auto center = fixed_array<2>(j, "center", where);
  const auto size = fixed_array<2>(j, "size", where);
  CameraCalibration c;
  c.intrinsics.focal_x = focal[0];
  c.intrinsics.focal_y = focal[1];
  c.intrinsics.center_x = center[0];
  c.intrinsics.center_y = center[1];
  if (size[0] != std::floor(size[0]) || size[1] != std::floor(size[1]))
    throw Error(ErrorCode::ParseError, where + ": size must be integral");
  c.intrinsics.width = static_cast<int>(size[0]);
  c.intrinsics.height = static_cast<int>(size[1]);
  const auto plane = j.find("plane");
  if (plane == j.end() || !plane->is_object())
    throw Error(ErrorCode::ParseError, where + ": missing plane");
  reject_unknown(*plane, {"normal", "offset"}, where + ".plane");
  const auto n = fixed_array<3>(*plane, "normal", where + ".plane");
  const auto offset = plane->find("offset");
  if (offset == plane->end() || !offset->is_number())
    throw Error(ErrorCode::ParseError, where + ".plane: missing offset");
  c.plane.normal = Vec3(n[0], n[1], n[2]);
  c.plane.offset = offset->get<double>();
  c.intrinsics.validate();
  c.plane.validate();
  return c;
}

CameraCalibration load_calibration(const std::filesystem::path& path) {
  return parse_calibration(read_json(path));
}

json calibration_to_json(const CameraCalibration& c) {
  const auto& k = c.intrinsics;
  return json{{"focal", {k.focal_x, k.focal_y}},
              {"center", {k.center_x, k.center_y}},
              {"size", {k.width, k.height}},
              {"plane",
               {{"normal", {c.plane.normal.x(), c.plane.normal.y(), c.plane.normal.z()}},
                {"offset", c.plane.offset}}}};
}

std::vector<CameraRig> parse_rigs(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "rig list: expected a JSON array");
  std::vector<CameraRig> rigs;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    const std::string where = "rig[" + std::to_string(i) + "]";
    if (!e.is_object()) throw Error(ErrorCode::ParseError, where + ": expected an object");
    reject_unknown(e, {"id", "image", "calibration", "env_map", "trajectories", "road_mask", "annotations"},
                   where);
    auto str = [&](const char* key) -> std::optional<std::string> {
      const auto it = e.find(key);
      if (it == e.end()) return std::nullopt;
      if (!it->is_string()) throw Error(ErrorCode::ParseError, where + ": '" + key + "' must be a string");
      return it->get<std::string>();
    };
    CameraRig rig;
    rig.id = str("id").value_or("rig" + std::to_string(i));
    if (!ids.insert(rig.id).second) throw Error(ErrorCode::InvalidArgument, where + ": duplicate id " + rig.id);
    const auto image = str("image");
    if (!image) throw Error(ErrorCode::ParseError, where + ": missing image");
    rig.image = existing(base_dir, *image, where);
    const auto calib = e.find("calibration");
    if (calib == e.end()) throw Error(ErrorCode::ParseError, where + ": missing calibration");
    rig.calibration = calib->is_string()
                          ? load_calibration(existing(base_dir, calib->get<std::string>(), where))
                          : parse_calibration(*calib);
    if (auto p = str("env_map")) rig.env_map = existing(base_dir, *p, where);
    if (auto p = str("trajectories")) rig.trajectories = existing(base_dir, *p, where);
    if (auto p = str("road_mask")) rig.road_mask = existing(base_dir, *p, where);
    if (auto p = str("annotations")) rig.annotations = existing(base_dir, *p, where);
    rigs.push_back(std::move(rig));
  }
  return rigs;
}

std::vector<CameraRig> load_rigs(const std::filesystem::path& path) {
  return parse_rigs(read_json(path), path.parent_path());
}

json rigs_to_json(const std::vector<CameraRig>& rigs) {
  json out = json::array();
  for (const CameraRig& r : rigs) {
    json e{{"id", r.id}, {"image", r.image.generic_string()}, {"calibration", calibration_to_json(r.calibration)}};
    if (r.env_map) e["env_map"] = r.env_map->generic_string();
    if (r.trajectories) e["trajectories"] = r.trajectories->generic_string();
    if (r.road_mask) e["road_mask"] = r.road_mask->generic_string();
    if (r.annotations) e["annotations"] = r.annotations->generic_string();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace augmentor
