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

// Command-line front end: augment, birdseye, stats, render-debug.

#include "augmentor/birdseye.hpp"
#include "augmentor/config.hpp"
#include "augmentor/error.hpp"
#include "augmentor/pipeline.hpp"
#include "augmentor/rig.hpp"
#include "augmentor/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace augmentor;

AugmentationConfig resolve_config(const std::string& path, const std::optional<std::uint64_t>& seed,
                                  const std::string& out) {
  AugmentationConfig config = path.empty() ? AugmentationConfig{} : load_config_file(path);
  if (seed) config.seed = *seed;
  if (!out.empty()) config.output_dir = out;
  return config;
}

std::size_t find_rig(const std::vector<CameraRig>& rigs, const std::string& id) {
  if (id.empty()) return 0;
  for (std::size_t i = 0; i < rigs.size(); ++i)
    if (rigs[i].id == id) return i;
  throw Error(ErrorCode::InvalidArgument, "no rig with id '" + id + "'");
}

Raster<std::uint16_t> ids_to_png16(const Raster<std::uint32_t>& ids) {
  Raster<std::uint16_t> out(ids.width(), ids.height());
  for (std::size_t i = 0; i < ids.size(); ++i)
    out[i] = static_cast<std::uint16_t>(std::min<std::uint32_t>(ids[i], 65535));
  return out;
}

Raster<std::array<std::uint16_t, 4>> color_to_png16(const Raster<RgbaF>& color) {
  Raster<std::array<std::uint16_t, 4>> out(color.width(), color.height());
  for (std::size_t i = 0; i < color.size(); ++i)
    for (int c = 0; c < 4; ++c)
      out[i][c] = static_cast<std::uint16_t>(std::lround(std::clamp(color[i][c], 0.0, 1.0) * 65535.0));
  return out;
}

void dump_layer(const RenderLayer& layer, const std::filesystem::path& dir, const std::string& prefix) {
  write_png_rgba16(dir / (prefix + "color.png"), color_to_png16(layer.color));
  Raster<double> depth = layer.depth;
  for (double& d : depth.pixels())
    if (!std::isfinite(d)) d = 0.0;
  write_pfm(dir / (prefix + "depth.pfm"), depth);
  write_png16(dir / (prefix + "ids.png"), ids_to_png16(layer.instance_ids));
  write_pfm(dir / (prefix + "shadow.pfm"), layer.shadow_alpha);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic car augmentation for calibrated street images"};
  app.require_subcommand(1);

  std::string config_path, rigs_path, out_dir, manifest_path, rig_id, stats_json;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  int augmentation = 0;
  double mpp = kDefaultMetersPerPixel;
  std::vector<double> extent;

  auto* augment = app.add_subcommand("augment", "Render an augmented dataset");
  augment->add_option("--config", config_path, "Config JSON")->check(CLI::ExistingFile);
  augment->add_option("--rigs", rigs_path, "Rig list JSON")->required()->check(CLI::ExistingFile);
  augment->add_option("--seed", seed, "Overrides the config seed");
  augment->add_option("--jobs", jobs, "Worker count (default: AUGMENTOR_THREADS or 1)")->check(CLI::PositiveNumber);
  augment->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* birdseye = app.add_subcommand("birdseye", "Export birdseye images and metadata for annotation");
  birdseye->add_option("--rigs", rigs_path, "Rig list JSON")->required()->check(CLI::ExistingFile);
  birdseye->add_option("--rig", rig_id, "Only this rig id (default: all)");
  birdseye->add_option("--mpp", mpp, "Meters per pixel")->check(CLI::PositiveNumber);
  birdseye->add_option("--extent", extent, "min_x max_x min_z max_z in meters")->expected(4);
  birdseye->add_option("--out", out_dir, "Output directory")->required();

  auto* stats = app.add_subcommand("stats", "Summarize an augmented dataset");
  stats->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  stats->add_option("--json", stats_json, "Also write the report as JSON");

  auto* debug = app.add_subcommand("render-debug", "Dump every render buffer of one composite");
  debug->add_option("--config", config_path, "Config JSON")->check(CLI::ExistingFile);
  debug->add_option("--rigs", rigs_path, "Rig list JSON")->required()->check(CLI::ExistingFile);
  debug->add_option("--rig", rig_id, "Rig id (default: first)");
  debug->add_option("--augmentation", augmentation, "Augmentation index")->check(CLI::NonNegativeNumber);
  debug->add_option("--seed", seed, "Overrides the config seed");
  debug->add_option("--jobs", jobs, "Render threads")->check(CLI::PositiveNumber);
  debug->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  if (jobs <= 0) jobs = default_jobs();

  try {
    if (*augment) {
      const AugmentationConfig config = resolve_config(config_path, seed, out_dir);
      const auto rigs = load_rigs(rigs_path);
      const AugmentationManifest m = augment_dataset(config, rigs, jobs);
      std::cout << "wrote " << m.composites.size() << " composites ("
                << m.synthetic_instances() << " synthetic cars) to " << config.output_dir.string() << "\n";
    } else if (*birdseye) {
      GroundRect rect = kDefaultBirdseyeExtent;
      if (!extent.empty()) rect = {extent[0], extent[1], extent[2], extent[3]};
      const auto rigs = load_rigs(rigs_path);
      if (!rig_id.empty()) find_rig(rigs, rig_id);
      for (const CameraRig& rig : rigs) {
        if (!rig_id.empty() && rig.id != rig_id) continue;
        const BirdseyeMeta meta = export_birdseye(rig, mpp, rect, out_dir);
        std::cout << rig.id << ": " << meta.width << "x" << meta.height << " -> "
                  << (std::filesystem::path(out_dir) / meta.image).string() << "\n";
      }
    } else if (*stats) {
      const DatasetStats s = compute_stats(manifest_path);
      std::cout << stats_table(s);
      if (!stats_json.empty()) {
        std::ofstream out(stats_json);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + stats_json);
        out << stats_to_json(s).dump(2) << "\n";
      }
    } else if (*debug) {
      const AugmentationConfig config = resolve_config(config_path, seed, "");
      const auto rigs = load_rigs(rigs_path);
      const std::size_t index = find_rig(rigs, rig_id);
      const DebugRender r = render_debug(config, rigs, index, augmentation, jobs);
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      dump_layer(r.raw, dir, "raw_");
      dump_layer(r.layer, dir, "post_");
      write_png(dir / "composite.png", r.composite);
      nlohmann::json info = r.annotations;
      nlohmann::json iso = nlohmann::json::object();
      for (const auto& [id, n] : r.layer.isolated_area) iso[std::to_string(id)] = n;
      info["isolated_area"] = iso;
      info["seed"] = r.record.seed;
      std::ofstream(dir / "layer.json") << info.dump(2) << "\n";
      std::cout << "dumped " << r.record.placements.size() << " instances to " << dir.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
