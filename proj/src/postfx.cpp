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

#include "augmentor/postfx.hpp"

#include "augmentor/error.hpp"

#include <algorithm>
#include <cmath>

namespace augmentor {

ColorCurve::ColorCurve() : knots_{Vec2(0.0, 0.0), Vec2(1.0, 1.0)} {}

ColorCurve::ColorCurve(std::vector<Vec2> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw Error(ErrorCode::InvalidArgument, "color curve needs >= 2 knots");
  if (knots_.front().x() != 0.0 || knots_.back().x() != 1.0)
    throw Error(ErrorCode::InvalidArgument, "color curve must span x in [0, 1]");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].y() >= 0.0 && knots_[i].y() <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "color curve values must lie in [0, 1]");
    if (i > 0 && !(knots_[i].x() > knots_[i - 1].x() && knots_[i].y() > knots_[i - 1].y()))
      throw Error(ErrorCode::InvalidArgument, "color curve knots must be strictly increasing");
  }
}

ColorCurve ColorCurve::gentle_s() {
  return ColorCurve({Vec2(0.0, 0.0), Vec2(0.25, 0.22), Vec2(0.75, 0.78), Vec2(1.0, 1.0)});
}

bool ColorCurve::is_identity() const noexcept {
  return std::all_of(knots_.begin(), knots_.end(), [](const Vec2& k) { return k.x() == k.y(); });
}

double ColorCurve::operator()(double c) const noexcept {
  c = std::clamp(c, 0.0, 1.0);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), c,
                             [](double v, const Vec2& k) { return v < k.x(); });
  if (it == knots_.end()) return knots_.back().y();
  if (it == knots_.begin()) return knots_.front().y();
  const Vec2& a = *(it - 1);
  const Vec2& b = *it;
  return a.y() + (b.y() - a.y()) * (c - a.x()) / (b.x() - a.x());
}

PostFxParams PostFxParams::neutral() {
  PostFxParams p;
  p.chroma_shift = 0.0;
  p.dof_strength = 0.0;
  p.color_curve = ColorCurve::identity();
  p.gamma = 1.0;
  return p;
}

void PostFxParams::validate() const {
  if (!(gamma > 0.0)) throw Error(ErrorCode::RangeViolation, "gamma must be positive");
  if (!(dof_strength >= 0.0)) throw Error(ErrorCode::NegativeStrength, "dof_strength must be >= 0");
  if (!(dof_focus > 0.0)) throw Error(ErrorCode::RangeViolation, "dof_focus must be positive");
  if (!std::isfinite(chroma_shift)) throw Error(ErrorCode::RangeViolation, "chroma_shift must be finite");
}

namespace {

double bilinear_channel(const Raster<RgbaF>& img, int channel, double x, double y) noexcept {
  if (x < 0.0 || y < 0.0 || x > img.width() - 1 || y > img.height() - 1) return 0.0;
  const int x0 = std::min(static_cast<int>(x), img.width() - 1);
  const int y0 = std::min(static_cast<int>(y), img.height() - 1);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img(x0, y0)[channel] * (1.0 - fx) + img(x1, y0)[channel] * fx;
  const double bottom = img(x0, y1)[channel] * (1.0 - fx) + img(x1, y1)[channel] * fx;
  return top * (1.0 - fy) + bottom * fy;
}

}  // namespace

RenderLayer chromatic_aberration(const RenderLayer& layer, double shift) {
  if (shift == 0.0 || layer.color.empty()) return layer;
  RenderLayer out = layer;
  const double cx = 0.5 * (layer.width() - 1);
  const double cy = 0.5 * (layer.height() - 1);
  const double radius = 0.5 * std::hypot(layer.width(), layer.height());
  const double red_scale = 1.0 + shift / radius;
  const double blue_scale = 1.0 - shift / radius;
  for (int y = 0; y < layer.height(); ++y) {
    for (int x = 0; x < layer.width(); ++x) {
      RgbaF& px = out.color(x, y);
      const double dx = x - cx;
      const double dy = y - cy;
      // Output at p reads the source at c + (p - c) / scale.
      px[0] = bilinear_channel(layer.color, 0, cx + dx / red_scale, cy + dy / red_scale);
      px[2] = bilinear_channel(layer.color, 2, cx + dx / blue_scale, cy + dy / blue_scale);
      // Keep the premultiplied bound: fringes cannot leave the silhouette.
      px[0] = std::min(px[0], px[3]);
      px[2] = std::min(px[2], px[3]);
    }
  }
  return out;
}

RenderLayer depth_blur(const RenderLayer& layer, double focus, double strength) {
  if (!(strength >= 0.0)) throw Error(ErrorCode::NegativeStrength, "blur strength must be >= 0");
  if (strength == 0.0 || layer.color.empty()) return layer;
  if (!(focus > 0.0)) throw Error(ErrorCode::RangeViolation, "focus distance must be positive");

  const int w = layer.width();
  const int h = layer.height();
  // Scatter: every source pixel spreads its premultiplied value over a disc,
  // weights renormalized over the in-image part so energy is conserved.
  Raster<RgbaF> accum(w, h, RgbaF{0.0, 0.0, 0.0, 0.0});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const RgbaF& src = layer.color(x, y);
      if (src[0] == 0.0 && src[1] == 0.0 && src[2] == 0.0 && src[3] == 0.0) continue;
      const double z = layer.depth(x, y);
      double r = 0.0;
      if (std::isfinite(z) && z > 0.0)
        r = std::clamp(strength * std::abs(1.0 / z - 1.0 / focus), 0.0, kMaxBlurRadius);
      const int ir = static_cast<int>(std::floor(r));
      if (ir == 0) {
        RgbaF& dst = accum(x, y);
        for (int c = 0; c < 4; ++c) dst[c] += src[c];
        continue;
      }
      const double r2 = r * r;
      const int y_lo = std::max(0, y - ir), y_hi = std::min(h - 1, y + ir);
      const int x_lo = std::max(0, x - ir), x_hi = std::min(w - 1, x + ir);
      int n = 0;
      for (int qy = y_lo; qy <= y_hi; ++qy)
        for (int qx = x_lo; qx <= x_hi; ++qx)
          if ((qx - x) * (qx - x) + (qy - y) * (qy - y) <= r2) ++n;
      const double wgt = 1.0 / n;
      for (int qy = y_lo; qy <= y_hi; ++qy)
        for (int qx = x_lo; qx <= x_hi; ++qx)
          if ((qx - x) * (qx - x) + (qy - y) * (qy - y) <= r2) {
            RgbaF& dst = accum(qx, qy);
            for (int c = 0; c < 4; ++c) dst[c] += src[c] * wgt;
          }
    }
  }
  RenderLayer out = layer;
  out.color = std::move(accum);
  return out;
}

RenderLayer tone_adjust(const RenderLayer& layer, const ColorCurve& curve, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::RangeViolation, "gamma must be positive");
  if (curve.is_identity() && gamma == 1.0) return layer;
  RenderLayer out = layer;
  const double inv_gamma = 1.0 / gamma;
  for (RgbaF& px : out.color.pixels()) {
    const double a = px[3];
    if (!(a > 0.0)) continue;
    for (int c = 0; c < 3; ++c) {
      const double straight = std::clamp(px[c] / a, 0.0, 1.0);
      px[c] = std::pow(curve(straight), inv_gamma) * a;
    }
  }
  return out;
}

RenderLayer apply_chain(const RenderLayer& layer, const PostFxParams& params) {
  if (!params.enabled) return layer;
  params.validate();
  RenderLayer out = chromatic_aberration(layer, params.chroma_shift);
  out = depth_blur(out, params.dof_focus, params.dof_strength);
  return tone_adjust(out, params.color_curve, params.gamma);
}

}  // namespace augmentor
