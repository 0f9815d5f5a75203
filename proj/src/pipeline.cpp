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

#include "augmentor/pipeline.hpp"

#include "augmentor/compositor.hpp"
#include "augmentor/envmap.hpp"
#include "augmentor/error.hpp"
#include "augmentor/postfx.hpp"
#include "augmentor/renderer.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace augmentor {

using json = nlohmann::json;

namespace {

// Independent substreams per composite so that, for matched seeds, changing
// one knob (e.g. max_cars) leaves every other decision untouched.
enum Stream : std::uint64_t { kCount = 1, kPlace = 2, kMaterial = 3, kEnv = 4, kBackground = 5 };

Rng stream(std::uint64_t composite, Stream s) { return Rng(hash_chain({composite, s})); }

json pose_to_json(const PoseSample& p) {
  json j{{"kind", p.kind == PoseKind::on_plane ? "on_plane" : "free"},
         {"position", {p.position.x(), p.position.y(), p.position.z()}}};
  if (p.kind == PoseKind::on_plane)
    j["yaw"] = p.yaw;
  else
    j["rotation"] = {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()};
  return j;
}

PoseSample pose_from_json(const json& j) {
  PoseSample p;
  const auto pos = j.at("position").get<std::vector<double>>();
  if (pos.size() != 3) throw Error(ErrorCode::CorruptManifest, "pose position needs 3 entries");
  p.position = Vec3(pos[0], pos[1], pos[2]);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "on_plane") {
    p.kind = PoseKind::on_plane;
    p.yaw = j.at("yaw").get<double>();
  } else if (kind == "free") {
    p.kind = PoseKind::free;
    const auto q = j.at("rotation").get<std::vector<double>>();
    if (q.size() != 4) throw Error(ErrorCode::CorruptManifest, "pose rotation needs 4 entries");
    p.rotation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
  } else {
    throw Error(ErrorCode::CorruptManifest, "unknown pose kind '" + kind + "'");
  }
  return p;
}

std::string file_stem(const CompositeRecord& r) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_aug%04d", r.augmentation);
  return r.rig_id + suffix;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

// Everything shared by the workers. Built once before the pool starts and
// only read afterwards.
struct SharedInputs {
  Catalog catalog;
  std::vector<std::filesystem::path> env_pool;
  std::vector<std::filesystem::path> background_pool;
  std::map<std::filesystem::path, std::shared_ptr<const EnvironmentMap>> env_maps;
  std::map<std::filesystem::path, ImageRgb8> backgrounds;
  std::vector<std::optional<TrajectorySet>> trajectories;
  std::vector<std::optional<ImageGray8>> road_masks;
  std::vector<std::vector<InstanceAnnotation>> real_annotations;
};

SharedInputs prepare(const AugmentationConfig& config, const std::vector<CameraRig>& rigs) {
  SharedInputs in;
  if (config.max_cars > 0) {
    if (config.catalog.empty())
      throw Error(ErrorCode::InvalidArgument, "config.catalog is required when max_cars > 0");
    in.catalog = load_catalog(config.catalog);
  }
  in.env_pool = expand_pool(config.env_pool);
  in.background_pool = expand_pool(config.background_pool);

  auto add_env = [&](const std::filesystem::path& p) {
    if (!in.env_maps.count(p)) in.env_maps.emplace(p, std::make_shared<const EnvironmentMap>(load_envmap(p, config.env_gamma_decode)));
  };
  if (config.env_mode == EnvMode::random_map)
    for (const auto& p : in.env_pool) add_env(p);
  if (config.env_mode == EnvMode::true_map)
    for (const CameraRig& rig : rigs)
      if (rig.env_map) add_env(*rig.env_map);

  if (config.background_mode == BackgroundMode::random_image ||
      config.background_mode == BackgroundMode::synthetic_proxy)
    for (const auto& p : in.background_pool)
      if (!in.backgrounds.count(p)) in.backgrounds.emplace(p, read_rgb8(p));

  for (const CameraRig& rig : rigs) {
    switch (config.placement_strategy) {
      case PlacementStrategy::manual:
        if (!rig.trajectories)
          throw Error(ErrorCode::MissingStrategyInput, "rig " + rig.id + ": manual placement needs trajectories");
        break;
      case PlacementStrategy::road_mask:
        if (!rig.road_mask)
          throw Error(ErrorCode::MissingStrategyInput, "rig " + rig.id + ": road_mask placement needs a road mask");
        break;
      default:
        break;
    }
    in.trajectories.push_back(rig.trajectories && config.placement_strategy == PlacementStrategy::manual
                                  ? std::optional(load_trajectories(*rig.trajectories))
                                  : std::nullopt);
    in.road_masks.push_back(rig.road_mask && config.placement_strategy == PlacementStrategy::road_mask
                                ? std::optional(read_gray8(*rig.road_mask))
                                : std::nullopt);
    in.real_annotations.push_back(rig.annotations ? load_annotations(*rig.annotations)
                                                  : std::vector<InstanceAnnotation>{});
  }
  return in;
}

std::vector<PoseSample> sample_poses(const AugmentationConfig& config, const CameraRig& rig,
                                     const SharedInputs& in, std::size_t rig_index, int count,
                                     Rng& rng) {
  const GroundPlane& plane = rig.calibration.plane;
  switch (config.placement_strategy) {
    case PlacementStrategy::manual:
      return sample_manual(*in.trajectories[rig_index], plane, count, rng);
    case PlacementStrategy::road_mask:
      return sample_road_mask(*in.road_masks[rig_index], rig.calibration.intrinsics, plane, count, rng);
    case PlacementStrategy::ground_plane:
      return sample_ground_plane(config.placement_region, plane, count, rng);
    case PlacementStrategy::unconstrained:
      return sample_unconstrained(config.unconstrained_volume, count, rng);
  }
  return {};
}

struct CompositeOutput {
  CompositeRecord record;
  ImageRgb8 image;
  json annotations;
  RenderLayer raw;
  RenderLayer layer;
};

CompositeOutput run_composite(const AugmentationConfig& config, const CameraRig& rig,
                              std::size_t rig_index, int j, const SharedInputs& in,
                              int render_threads, bool keep_raw = false) {
  CompositeOutput out;
  CompositeRecord& rec = out.record;
  rec.rig_index = rig_index;
  rec.rig_id = rig.id;
  rec.augmentation = j;
  rec.seed = composite_seed(config.seed, rig_index, j);
  rec.source_image = rig.image.generic_string();
  if (rig.annotations) rec.source_annotations = rig.annotations->generic_string();
  rec.image_file = "images/" + file_stem(rec) + ".png";
  rec.annotation_file = "annotations/" + file_stem(rec) + ".json";

  Rng count_rng = stream(rec.seed, kCount);
  Rng place_rng = stream(rec.seed, kPlace);
  Rng material_rng = stream(rec.seed, kMaterial);
  Rng env_rng = stream(rec.seed, kEnv);
  Rng bg_rng = stream(rec.seed, kBackground);

  rec.cars_requested = draw_car_count(config, count_rng);
  const std::vector<InstanceAnnotation>& real = in.real_annotations[rig_index];
  std::uint32_t first_id = 1;
  for (const InstanceAnnotation& a : real) first_id = std::max(first_id, a.instance_id + 1);

  std::vector<SceneInstance> instances;
  if (rec.cars_requested > 0) {
    const std::vector<PoseSample> poses =
        sample_poses(config, rig, in, rig_index, rec.cars_requested, place_rng);
    std::vector<CatalogDraw> draws;
    std::vector<const CarModel*> models;
    for (std::size_t i = 0; i < poses.size(); ++i) {
      draws.push_back(catalog_sample(in.catalog, material_rng));
      models.push_back(draws.back().model.get());
    }
    for (std::size_t i : collision_free_indices(poses, models, rig.calibration.plane)) {
      SceneInstance inst{draws[i].model, draws[i].material, poses[i],
                         first_id + static_cast<std::uint32_t>(i)};
      instances.push_back(inst);
      rec.placements.push_back({inst.instance_id, inst.model->name, inst.model->category, inst.material, inst.pose});
    }
  }

  const EnvLoader env_loader = [&](const std::filesystem::path& p) { return in.env_maps.at(p); };
  const auto env = resolve_env(config.env_mode, rig.env_map, in.env_pool, env_rng, env_loader);

  const CameraIntrinsics& k = rig.calibration.intrinsics;
  RenderLayer& layer = out.layer;
  layer = RenderLayer::empty(k.width, k.height);
  if (!instances.empty()) {
    RenderSettings settings = config.render;
    settings.rng_seed = rec.seed;
    layer = render_layer(instances, rig.calibration, *env, settings, 0, render_threads);
    if (keep_raw) out.raw = layer;
    if (config.postfx.enabled) layer = apply_chain(layer, config.postfx);
  } else if (keep_raw) {
    out.raw = layer;
  }

  ImageRgb8 real_image;
  if (config.background_mode == BackgroundMode::real) real_image = read_rgb8(rig.image);
  const ImageLoader bg_loader = [&](const std::filesystem::path& p) { return in.backgrounds.at(p); };
  const ImageRgb8 background =
      resolve_background(config.background_mode, config.background_mode == BackgroundMode::real ? &real_image : nullptr,
                         in.background_pool, bg_rng, k.width, k.height, bg_loader);
  out.image = composite(background, layer);

  std::vector<InstanceAnnotation> anns = update_real_masks(real, layer);
  for (InstanceAnnotation& a : derive_annotations(layer, instances)) anns.push_back(std::move(a));
  out.annotations = annotations_to_json(rec.image_file, anns);
  return out;
}

json material_to_json(const Material& m) {
  return json{{"base_color", m.base_color},
              {"specular_weight", m.specular_weight},
              {"finish", m.finish == Finish::mirror ? "mirror" : "diffuse-only"}};
}

}  // namespace

std::size_t AugmentationManifest::synthetic_instances() const {
  std::size_t n = 0;
  for (const CompositeRecord& c : composites) n += c.placements.size();
  return n;
}

std::uint64_t composite_seed(std::uint64_t seed, std::size_t rig_index, int augmentation) {
  return hash_chain({seed, static_cast<std::uint64_t>(rig_index), static_cast<std::uint64_t>(augmentation)});
}

int draw_car_count(const AugmentationConfig& config, Rng& rng) {
  if (config.max_cars <= 0) return 0;
  if (config.cars_mode == CarsMode::exact) return config.max_cars;
  return 1 + static_cast<int>(rng.index(static_cast<std::size_t>(config.max_cars)));
}

json manifest_to_json(const AugmentationManifest& m) {
  json composites = json::array();
  for (const CompositeRecord& c : m.composites) {
    json placements = json::array();
    for (const PlacementRecord& p : c.placements)
      placements.push_back({{"instance_id", p.instance_id},
                            {"model", p.model},
                            {"category", to_string(p.category)},
                            {"material", material_to_json(p.material)},
                            {"pose", pose_to_json(p.pose)}});
    composites.push_back({{"rig", c.rig_index},
                          {"rig_id", c.rig_id},
                          {"augmentation", c.augmentation},
                          {"seed", c.seed},
                          {"cars_requested", c.cars_requested},
                          {"placements", std::move(placements)},
                          {"image", c.image_file},
                          {"annotations", c.annotation_file},
                          {"source_image", c.source_image},
                          {"source_annotations", c.source_annotations ? json(*c.source_annotations) : json(nullptr)}});
  }
  return json{{"config_fingerprint", m.config_fingerprint},
              {"config", m.config},
              {"composites", std::move(composites)}};
}

AugmentationManifest manifest_from_json(const json& j) {
  try {
    AugmentationManifest m;
    m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    m.config = j.at("config");
    for (const json& c : j.at("composites")) {
      CompositeRecord r;
      r.rig_index = c.at("rig").get<std::size_t>();
      r.rig_id = c.at("rig_id").get<std::string>();
      r.augmentation = c.at("augmentation").get<int>();
      r.seed = c.at("seed").get<std::uint64_t>();
      r.cars_requested = c.at("cars_requested").get<int>();
      r.image_file = c.at("image").get<std::string>();
      r.annotation_file = c.at("annotations").get<std::string>();
      r.source_image = c.at("source_image").get<std::string>();
      if (!c.at("source_annotations").is_null()) r.source_annotations = c.at("source_annotations").get<std::string>();
      for (const json& p : c.at("placements")) {
        PlacementRecord pr;
        pr.instance_id = p.at("instance_id").get<std::uint32_t>();
        pr.model = p.at("model").get<std::string>();
        pr.category = parse_category(p.at("category").get<std::string>());
        const json& mat = p.at("material");
        pr.material.base_color = mat.at("base_color").get<RgbF>();
        pr.material.specular_weight = mat.at("specular_weight").get<double>();
        pr.material.finish = mat.at("finish").get<std::string>() == "mirror" ? Finish::mirror : Finish::diffuse_only;
        pr.pose = pose_from_json(p.at("pose"));
        r.placements.push_back(std::move(pr));
      }
      m.composites.push_back(std::move(r));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptManifest, std::string("manifest: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptManifest) throw;
    throw Error(ErrorCode::CorruptManifest, std::string("manifest: ") + e.what());
  }
}

AugmentationManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::CorruptManifest, "cannot open manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::CorruptManifest, path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

int default_jobs() {
  if (const char* env = std::getenv("AUGMENTOR_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(std::min<long>(n, 1024));
  }
  return 1;
}

AugmentationManifest augment_dataset(const AugmentationConfig& config,
                                     const std::vector<CameraRig>& rigs, int jobs) {
  config.validate();
  const SharedInputs inputs = prepare(config, rigs);

  const std::filesystem::path out_dir = config.output_dir;
  std::filesystem::create_directories(out_dir / "images");
  std::filesystem::create_directories(out_dir / "annotations");

  const int n = config.augmentations_per_image;
  const std::size_t total = rigs.size() * static_cast<std::size_t>(n);
  std::vector<CompositeRecord> records(total);
  std::vector<std::optional<Error>> errors(total);

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(total, 1))));
  const int render_threads = std::max(1, jobs / workers);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (std::size_t idx = next++; idx < total && !failed; idx = next++) {
      const std::size_t r = idx / static_cast<std::size_t>(n);
      const int j = static_cast<int>(idx % static_cast<std::size_t>(n));
      const std::string where = "rig " + rigs[r].id + " (index " + std::to_string(r) + "), augmentation " + std::to_string(j);
      try {
        CompositeOutput out = run_composite(config, rigs[r], r, j, inputs, render_threads);
        write_png(out_dir / out.record.image_file, out.image);
        write_text(out_dir / out.record.annotation_file, out.annotations.dump(2) + "\n");
        records[idx] = std::move(out.record);
      } catch (const Error& e) {
        errors[idx] = Error(e.code(), where + ": " + e.what(), e.line());
        failed = true;
      } catch (const std::exception& e) {
        errors[idx] = Error(ErrorCode::Io, where + ": " + e.what());
        failed = true;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) throw *e;

  AugmentationManifest manifest;
  manifest.config_fingerprint = config_fingerprint(config);
  manifest.config = config_to_json(config);
  manifest.config.erase("output_dir");
  manifest.composites = std::move(records);
  write_text(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

DebugRender render_debug(const AugmentationConfig& config, const std::vector<CameraRig>& rigs,
                         std::size_t rig_index, int augmentation, int threads) {
  config.validate();
  if (rig_index >= rigs.size()) throw Error(ErrorCode::InvalidArgument, "rig index out of range");
  if (augmentation < 0) throw Error(ErrorCode::InvalidArgument, "negative augmentation index");
  const SharedInputs inputs = prepare(config, rigs);
  CompositeOutput out = run_composite(config, rigs[rig_index], rig_index, augmentation, inputs,
                                      std::max(1, threads), true);
  return DebugRender{std::move(out.record), std::move(out.raw), std::move(out.layer),
                     std::move(out.image), std::move(out.annotations)};
}

}  // namespace augmentor
