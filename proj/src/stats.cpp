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

#include "augmentor/stats.hpp"

#include "augmentor/compositor.hpp"
#include "augmentor/error.hpp"
#include "augmentor/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace augmentor {

using json = nlohmann::json;

namespace {

std::vector<InstanceAnnotation> read_annotations(const std::filesystem::path& path) {
  try {
    return load_annotations(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptManifest, std::string("annotation file: ") + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptManifest, path.string() + ": " + e.what());
  }
}

std::uint64_t count_removed(const RleMask& original, const RleMask* updated) {
  if (!updated) return original.area();
  if (updated->width != original.width || updated->height != original.height)
    throw Error(ErrorCode::CorruptManifest, "real mask size changed between source and composite");
  const BinaryMask a = original.decode();
  const BinaryMask b = updated->decode();
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] && !b[i]) ? 1 : 0;
  return n;
}

}  // namespace

DatasetStats compute_stats(const std::filesystem::path& manifest_path) {
  const AugmentationManifest manifest = load_manifest(manifest_path);
  const std::filesystem::path root = manifest_path.parent_path();
  std::map<std::string, std::vector<InstanceAnnotation>> sources;

  DatasetStats s;
  for (const CompositeRecord& c : manifest.composites) {
    ++s.composites;
    s.synthetic_instances += c.placements.size();
    ++s.cars_per_composite[static_cast<int>(c.placements.size())];

    const std::vector<InstanceAnnotation> anns = read_annotations(root / c.annotation_file);
    std::map<std::uint32_t, const InstanceAnnotation*> real_now;
    for (const InstanceAnnotation& a : anns) {
      if (a.origin == InstanceOrigin::real) {
        ++s.real_instances;
        real_now[a.instance_id] = &a;
      } else {
        ++s.visible_synthetic_instances;
        const double v = std::clamp(a.visible_fraction, 0.0, 1.0);
        ++s.visible_fraction[std::min<std::size_t>(9, static_cast<std::size_t>(v * 10.0))];
      }
    }
    if (!c.source_annotations) {
      if (!real_now.empty())
        throw Error(ErrorCode::CorruptManifest, c.annotation_file + ": real instances without a source annotation file");
      continue;
    }
    auto it = sources.find(*c.source_annotations);
    if (it == sources.end())
      it = sources.emplace(*c.source_annotations, read_annotations(*c.source_annotations)).first;
    for (const InstanceAnnotation& orig : it->second) {
      const auto now = real_now.find(orig.instance_id);
      s.covered_real_pixels += count_removed(orig.mask, now == real_now.end() ? nullptr : &now->second->mask);
    }
  }
  return s;
}

json stats_to_json(const DatasetStats& s) {
  json cars = json::object();
  for (const auto& [k, n] : s.cars_per_composite) cars[std::to_string(k)] = n;
  return json{{"composites", s.composites},
              {"real_instances", s.real_instances},
              {"synthetic_instances", s.synthetic_instances},
              {"visible_synthetic_instances", s.visible_synthetic_instances},
              {"covered_real_pixels", s.covered_real_pixels},
              {"cars_per_composite", cars},
              {"visible_fraction_histogram", s.visible_fraction}};
}

std::string stats_table(const DatasetStats& s) {
  std::ostringstream out;
  auto row = [&](const std::string& name, auto value) {
    out << std::left << std::setw(30) << name << value << "\n";
  };
  row("composites", s.composites);
  row("real instances", s.real_instances);
  row("synthetic instances", s.synthetic_instances);
  row("visible synthetic instances", s.visible_synthetic_instances);
  row("covered real pixels", s.covered_real_pixels);
  out << "\ncars per composite\n";
  for (const auto& [k, n] : s.cars_per_composite) row("  " + std::to_string(k), n);
  out << "\nvisible fraction\n";
  for (std::size_t b = 0; b < s.visible_fraction.size(); ++b) {
    std::ostringstream label;
    label << std::fixed << std::setprecision(1) << "  [" << b / 10.0 << ", " << (b + 1) / 10.0
          << (b == 9 ? "]" : ")");
    row(label.str(), s.visible_fraction[b]);
  }
  return out.str();
}

}  // namespace augmentor
