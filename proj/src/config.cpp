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

#include "augmentor/config.hpp"

#include "augmentor/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace augmentor {

using json = nlohmann::json;

std::string_view to_string(PlacementStrategy s) {
  switch (s) {
    case PlacementStrategy::manual: return "manual";
    case PlacementStrategy::road_mask: return "road_mask";
    case PlacementStrategy::ground_plane: return "ground_plane";
    case PlacementStrategy::unconstrained: return "unconstrained";
  }
  return "manual";
}

std::string_view to_string(EnvMode m) {
  switch (m) {
    case EnvMode::true_map: return "true_map";
    case EnvMode::random_map: return "random_map";
    case EnvMode::none: return "none";
  }
  return "none";
}

std::string_view to_string(CarsMode m) { return m == CarsMode::exact ? "exact" : "uniform"; }

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error(ErrorCode::ParseError, path_ + ": expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    try {
      return v->get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::ParseError, path_ + "." + key + ": wrong type");
    }
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw Error(ErrorCode::UnknownKey, path_ + ": unknown key '" + key + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename E>
E parse_enum(const std::string& value, const std::string& where,
             std::initializer_list<std::pair<std::string_view, E>> options) {
  for (const auto& [name, e] : options)
    if (name == value) return e;
  throw Error(ErrorCode::RangeViolation, where + ": unknown value '" + value + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path.lexically_normal();
  return (base / path).lexically_normal();
}

std::vector<std::filesystem::path> path_list(StrictObject& obj, const std::string& key,
                                             const std::filesystem::path& base) {
  std::vector<std::filesystem::path> out;
  for (const std::string& p : obj.get<std::vector<std::string>>(key, {})) out.push_back(resolve(base, p));
  return out;
}

void range_check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::RangeViolation, what);
}

}  // namespace

void AugmentationConfig::validate() const {
  range_check(augmentations_per_image >= 1, "augmentations_per_image must be >= 1");
  range_check(max_cars >= 0, "max_cars must be >= 0");
  placement_region.validate();
  unconstrained_volume.validate();
  postfx.validate();
  render.validate();
}

AugmentationConfig load_config(std::string_view text, const std::filesystem::path& base_dir,
                               const std::string& source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + e.what(), line);
  }

  AugmentationConfig c;
  StrictObject root(j, "config");
  const int augmentations = root.get<int>("augmentations_per_image", c.augmentations_per_image);
  range_check(augmentations >= 1, "augmentations_per_image must be >= 1");
  c.augmentations_per_image = augmentations;
  const int max_cars = root.get<int>("max_cars", c.max_cars);
  range_check(max_cars >= 0, "max_cars must be >= 0");
  c.max_cars = max_cars;
  c.cars_mode = parse_enum<CarsMode>(root.get<std::string>("cars_mode", "uniform"), "cars_mode",
                                     {{"uniform", CarsMode::uniform}, {"exact", CarsMode::exact}});
  c.placement_strategy = parse_enum<PlacementStrategy>(
      root.get<std::string>("placement_strategy", "manual"), "placement_strategy",
      {{"manual", PlacementStrategy::manual},
       {"road_mask", PlacementStrategy::road_mask},
       {"ground_plane", PlacementStrategy::ground_plane},
       {"unconstrained", PlacementStrategy::unconstrained}});

  if (const json* region = root.find("placement_region")) {
    StrictObject r(*region, root.child("placement_region"));
    c.placement_region.min_x = r.get<double>("min_x", c.placement_region.min_x);
    c.placement_region.max_x = r.get<double>("max_x", c.placement_region.max_x);
    c.placement_region.min_z = r.get<double>("min_z", c.placement_region.min_z);
    c.placement_region.max_z = r.get<double>("max_z", c.placement_region.max_z);
    c.placement_region.max_count = r.get<int>("max_count", c.placement_region.max_count);
    r.finish();
  }
  if (const json* volume = root.find("unconstrained_volume")) {
    StrictObject v(*volume, root.child("unconstrained_volume"));
    auto lo = v.get<std::vector<double>>("min", {});
    auto hi = v.get<std::vector<double>>("max", {});
    if (!lo.empty()) {
      range_check(lo.size() == 3, "unconstrained_volume.min must have 3 entries");
      c.unconstrained_volume.min = Vec3(lo[0], lo[1], lo[2]);
    }
    if (!hi.empty()) {
      range_check(hi.size() == 3, "unconstrained_volume.max must have 3 entries");
      c.unconstrained_volume.max = Vec3(hi[0], hi[1], hi[2]);
    }
    v.finish();
  }

  c.env_mode = parse_enum<EnvMode>(root.get<std::string>("env_mode", "true_map"), "env_mode",
                                   {{"true_map", EnvMode::true_map},
                                    {"random_map", EnvMode::random_map},
                                    {"none", EnvMode::none}});
  c.env_pool = path_list(root, "env_pool", base_dir);
  c.env_gamma_decode = root.get<bool>("env_gamma_decode", c.env_gamma_decode);
  c.background_mode = parse_enum<BackgroundMode>(
      root.get<std::string>("background_mode", "real"), "background_mode",
      {{"real", BackgroundMode::real},
       {"black", BackgroundMode::black},
       {"random_image", BackgroundMode::random_image},
       {"synthetic_proxy", BackgroundMode::synthetic_proxy}});
  c.background_pool = path_list(root, "background_pool", base_dir);

  if (const json* fx = root.find("postfx")) {
    StrictObject p(*fx, root.child("postfx"));
    c.postfx.enabled = p.get<bool>("enabled", c.postfx.enabled);
    c.postfx.chroma_shift = p.get<double>("chroma_shift", c.postfx.chroma_shift);
    c.postfx.dof_focus = p.get<double>("dof_focus", c.postfx.dof_focus);
    c.postfx.dof_strength = p.get<double>("dof_strength", c.postfx.dof_strength);
    c.postfx.gamma = p.get<double>("gamma", c.postfx.gamma);
    if (const json* curve = p.find("color_curve")) {
      std::vector<Vec2> knots;
      try {
        for (const json& k : *curve) knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
      } catch (const json::exception&) {
        throw Error(ErrorCode::ParseError, "config.postfx.color_curve: expected [[x, y], ...]");
      }
      try {
        c.postfx.color_curve = ColorCurve(std::move(knots));
      } catch (const Error& e) {
        throw Error(ErrorCode::RangeViolation, std::string("config.postfx.color_curve: ") + e.what());
      }
    }
    p.finish();
    if (c.postfx.dof_strength < 0.0)
      throw Error(ErrorCode::RangeViolation, "config.postfx.dof_strength must be >= 0");
  }

  if (const json* render = root.find("render")) {
    StrictObject r(*render, root.child("render"));
    c.render.samples_per_pixel = r.get<int>("samples_per_pixel", c.render.samples_per_pixel);
    c.render.diffuse_env_samples = r.get<int>("diffuse_env_samples", c.render.diffuse_env_samples);
    c.render.shadow_samples = r.get<int>("shadow_samples", c.render.shadow_samples);
    c.render.enable_shadows = r.get<bool>("enable_shadows", c.render.enable_shadows);
    c.render.max_shadow = r.get<double>("max_shadow", c.render.max_shadow);
    r.finish();
  }

  c.seed = root.get<std::uint64_t>("seed", c.seed);
  if (const json* catalog = root.find("catalog")) {
    if (!catalog->is_string()) throw Error(ErrorCode::ParseError, "config.catalog: wrong type");
    c.catalog = resolve(base_dir, catalog->get<std::string>());
  }
  if (const json* out = root.find("output_dir")) {
    if (!out->is_string()) throw Error(ErrorCode::ParseError, "config.output_dir: wrong type");
    c.output_dir = resolve(base_dir, out->get<std::string>());
  }
  root.finish();

  try {
    c.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::NegativeStrength)
      throw Error(ErrorCode::RangeViolation, e.what());
    throw;
  }
  return c;
}

AugmentationConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), path.parent_path(), path.string());
}

json config_to_json(const AugmentationConfig& c) {
  auto paths = [](const std::vector<std::filesystem::path>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(p.generic_string());
    return a;
  };
  json curve = json::array();
  for (const Vec2& k : c.postfx.color_curve.knots()) curve.push_back({k.x(), k.y()});
  return json{
      {"augmentations_per_image", c.augmentations_per_image},
      {"max_cars", c.max_cars},
      {"cars_mode", to_string(c.cars_mode)},
      {"placement_strategy", to_string(c.placement_strategy)},
      {"placement_region",
       {{"min_x", c.placement_region.min_x},
        {"max_x", c.placement_region.max_x},
        {"min_z", c.placement_region.min_z},
        {"max_z", c.placement_region.max_z},
        {"max_count", c.placement_region.max_count}}},
      {"unconstrained_volume",
       {{"min", {c.unconstrained_volume.min.x(), c.unconstrained_volume.min.y(), c.unconstrained_volume.min.z()}},
        {"max", {c.unconstrained_volume.max.x(), c.unconstrained_volume.max.y(), c.unconstrained_volume.max.z()}}}},
      {"env_mode", to_string(c.env_mode)},
      {"env_pool", paths(c.env_pool)},
      {"env_gamma_decode", c.env_gamma_decode},
      {"background_mode", to_string(c.background_mode)},
      {"background_pool", paths(c.background_pool)},
      {"postfx",
       {{"enabled", c.postfx.enabled},
        {"chroma_shift", c.postfx.chroma_shift},
        {"dof_focus", c.postfx.dof_focus},
        {"dof_strength", c.postfx.dof_strength},
        {"color_curve", curve},
        {"gamma", c.postfx.gamma}}},
      {"render",
       {{"samples_per_pixel", c.render.samples_per_pixel},
        {"diffuse_env_samples", c.render.diffuse_env_samples},
        {"shadow_samples", c.render.shadow_samples},
        {"enable_shadows", c.render.enable_shadows},
        {"max_shadow", c.render.max_shadow}}},
      {"seed", c.seed},
      {"catalog", c.catalog.generic_string()},
      {"output_dir", c.output_dir.generic_string()},
  };
}

std::string config_fingerprint(const AugmentationConfig& config) {
  json j = config_to_json(config);
  j.erase("output_dir");
  const std::string text = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Io, "SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

std::vector<std::filesystem::path> expand_pool(std::span<const std::filesystem::path> entries) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : entries) {
    if (std::filesystem::is_directory(entry)) {
      std::vector<std::filesystem::path> files;
      for (const auto& f : std::filesystem::directory_iterator(entry)) {
        const auto ext = f.path().extension().string();
        if (f.is_regular_file() && (ext == ".png" || ext == ".pfm" || ext == ".PNG")) files.push_back(f.path());
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(entry);
    }
  }
  return out;
}

}  // namespace augmentor
