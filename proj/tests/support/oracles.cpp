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

#include "oracles.hpp"

#include "augmentor/placement.hpp"

#include <Eigen/SVD>
#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

namespace oracles {

namespace {

Mat3 normalizer(std::span<const Vec2> pts) {
  Vec2 mean = Vec2::Zero();
  for (const Vec2& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double spread = 0.0;
  for (const Vec2& p : pts) spread += (p - mean).norm();
  spread /= static_cast<double>(pts.size());
  const double s = std::sqrt(2.0) / spread;
  Mat3 t;
  t << s, 0, -s * mean.x(), 0, s, -s * mean.y(), 0, 0, 1;
  return t;
}

}  // namespace

Mat3 dlt_homography(std::span<const Vec2> ground, std::span<const Vec2> pixels) {
  const Mat3 tg = normalizer(ground);
  const Mat3 tp = normalizer(pixels);
  Eigen::MatrixXd a(2 * ground.size(), 9);
  for (std::size_t i = 0; i < ground.size(); ++i) {
    const Vec3 g = tg * ground[i].homogeneous();
    const Vec3 p = tp * pixels[i].homogeneous();
    const double u = p.x() / p.z(), v = p.y() / p.z();
    a.row(2 * i) << g.x(), g.y(), g.z(), 0, 0, 0, -u * g.x(), -u * g.y(), -u * g.z();
    a.row(2 * i + 1) << 0, 0, 0, g.x(), g.y(), g.z(), -v * g.x(), -v * g.y(), -v * g.z();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Mat3 hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return tp.inverse() * hn * tg;
}

double scale_free_distance(const Mat3& a, const Mat3& b) {
  Mat3 an = a / a.norm();
  Mat3 bn = b / b.norm();
  if ((an.array() * bn.array()).sum() < 0) bn = -bn;
  return (an - bn).cwiseAbs().maxCoeff();
}

std::vector<SoupTriangle> triangle_soup(std::span<const augmentor::SceneInstance> instances,
                                        const augmentor::GroundPlane& plane) {
  std::vector<SoupTriangle> soup;
  for (const auto& inst : instances) {
    const auto xf = augmentor::pose_transform(inst.pose, plane);
    const auto& mesh = inst.model->mesh;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      SoupTriangle s;
      for (int k = 0; k < 3; ++k) s.p[k] = xf.linear * mesh.vertices[mesh.triangles[t].vertex[k]] + xf.translation;
      s.instance_id = inst.instance_id;
      s.triangle_index = static_cast<std::uint32_t>(t);
      soup.push_back(s);
    }
  }
  return soup;
}

std::optional<SoupHit> brute_force_nearest(std::span<const SoupTriangle> soup, const Vec3& origin,
                                           const Vec3& dir) {
  std::optional<SoupHit> best;
  for (const SoupTriangle& tri : soup) {
    const Vec3 n = (tri.p[1] - tri.p[0]).cross(tri.p[2] - tri.p[0]);
    const double denom = n.dot(dir);
    if (denom == 0.0) continue;
    const double t = n.dot(tri.p[0] - origin) / denom;
    if (!(t > 1e-9)) continue;
    const Vec3 x = origin + t * dir;
    bool inside = true;
    for (int k = 0; k < 3 && inside; ++k) {
      const Vec3& a = tri.p[k];
      const Vec3& b = tri.p[(k + 1) % 3];
      inside = (b - a).cross(x - a).dot(n) >= 0.0;
    }
    if (!inside) continue;
    const SoupHit h{tri.instance_id, tri.triangle_index, t};
    if (!best || t < best->t - 1e-12) {
      best = h;
    } else if (std::abs(t - best->t) < 1e-12 &&
               std::pair(h.instance_id, h.triangle_index) < std::pair(best->instance_id, best->triangle_index)) {
      best = h;
    }
  }
  return best;
}

double chi_square_p(std::span<const double> observed, std::span<const double> expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace oracles
