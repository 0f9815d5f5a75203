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
#include "augmentor/renderer.hpp"

#include <vector>

namespace augmentor {

/// Monotone piecewise-linear map on [0, 1].
class ColorCurve {
 public:
  ColorCurve();  // identity
  explicit ColorCurve(std::vector<Vec2> knots);

  static ColorCurve identity() { return ColorCurve(); }
  /// Gentle contrast S-curve used by default.
  static ColorCurve gentle_s();

  const std::vector<Vec2>& knots() const noexcept { return knots_; }
  bool is_identity() const noexcept;
  double operator()(double c) const noexcept;

  friend bool operator==(const ColorCurve& a, const ColorCurve& b) { return a.knots_ == b.knots_; }

 private:
  std::vector<Vec2> knots_;
};

struct PostFxParams {
  bool enabled = true;
  /// Radial channel separation in pixels at the image corner.
  double chroma_shift = 1.0;
  double dof_focus = 12.0;
  /// Blur radius in pixels per unit |1/z - 1/focus|.
  double dof_strength = 15.0;
  ColorCurve color_curve = ColorCurve::gentle_s();
  double gamma = 1.05;

  /// Parameters under which every stage is an exact identity.
  static PostFxParams neutral();
  void validate() const;
};

inline constexpr double kMaxBlurRadius = 16.0;

RenderLayer chromatic_aberration(const RenderLayer& layer, double shift);
RenderLayer depth_blur(const RenderLayer& layer, double focus, double strength);
RenderLayer tone_adjust(const RenderLayer& layer, const ColorCurve& curve, double gamma);
/// chromatic_aberration -> depth_blur -> tone_adjust.
RenderLayer apply_chain(const RenderLayer& layer, const PostFxParams& params);

}  // namespace augmentor
