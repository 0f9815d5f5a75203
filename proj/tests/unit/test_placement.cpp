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

#include "augmentor/error.hpp"
#include "augmentor/placement.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace augmentor;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

TrajectorySet single_segment() {
  TrajectorySet t;
  t.polylines = {{Vec2(0, 5), Vec2(0, 15)}};
  return t;
}

// |sin(a - b)| is zero iff the angles agree modulo pi.
double mod_pi_error(double a, double b) { return std::abs(std::sin(a - b)); }

}  // namespace

TEST_CASE("PoseSample::on_plane lies on the plane and wraps yaw") {
  const GroundPlane plane = GroundPlane::from_height(1.5);
  const PoseSample p = PoseSample::on_plane(plane, Vec2(2, 9), -kPi / 2);
  CHECK(p.position.isApprox(Vec3(2, 1.5, 9)));
  CHECK(p.yaw == Approx(1.5 * kPi));
  CHECK(wrap_angle(2 * kPi) == Approx(0.0));
  CHECK(wrap_angle(-1e-20) >= 0.0);
  CHECK(wrap_angle(-1e-20) < 2 * kPi);
}

TEST_CASE("pose_transform stands models on the plane") {
  const GroundPlane plane = GroundPlane::from_height(1.5);
  const RigidTransform t0 = pose_transform(PoseSample::on_plane(plane, Vec2(1, 10), 0.0), plane);
  CHECK(t0.apply(Vec3::Zero()).isApprox(Vec3(1, 1.5, 10)));
  CHECK(t0.apply(Vec3(0, 1, 0)).isApprox(Vec3(1, 0.5, 10)));  // model up is camera -y
  CHECK(t0.apply(Vec3(0, 0, 1)).isApprox(Vec3(1, 1.5, 11)));  // forward stays +z
  const RigidTransform t90 = pose_transform(PoseSample::on_plane(plane, Vec2(0, 10), kPi / 2), plane);
  CHECK(t90.apply(Vec3(0, 0, 1)).isApprox(Vec3(1, 1.5, 10)));  // forward turns to +x
  CHECK(std::abs(t90.linear.determinant() - t0.linear.determinant()) < 1e-12);

  const RigidTransform tf = pose_transform(PoseSample::free(Vec3(0, 0, 5), Eigen::Quaterniond::Identity()), plane);
  CHECK(tf.apply(Vec3(0, 1, 0)).isApprox(Vec3(0, -1, 5)));
}

TEST_CASE("parse_trajectories reads the annotator format") {
  const TrajectorySet t = parse_trajectories(
      R"({"meters_per_pixel":0.1,"extent":{"min_x":-20,"max_x":20,"min_z":4,"max_z":64},
          "polylines":[[[0,5],[0,15]],[[1,5],[2,6],[3,9]]]})",
      "mem");
  REQUIRE(t.polylines.size() == 2);
  CHECK(t.polylines[1][2].isApprox(Vec2(3, 9)));
  CHECK(t.source == "mem");
  CHECK_THROWS_AS(parse_trajectories(R"({"polylines":[[[0,5]]]})"), Error);
  CHECK_THROWS_AS(parse_trajectories(R"({"polylines":[[[0,5],[0,5]]]})"), Error);
  CHECK(code_of([] { parse_trajectories("{"); }) == ErrorCode::ParseError);
}

TEST_CASE("sample_manual: single segment") {
  const GroundPlane plane = GroundPlane::from_height(1.5);
  Rng rng(1);
  for (const PoseSample& p : sample_manual(single_segment(), plane, 200, rng)) {
    CHECK(p.kind == PoseKind::on_plane);
    CHECK(std::abs(p.position.x()) < 1e-12);
    CHECK(p.position.z() >= 5.0);
    CHECK(p.position.z() <= 15.0);
    CHECK((std::abs(p.yaw) < 1e-12 || std::abs(p.yaw - kPi) < 1e-12));
  }
}

TEST_CASE("sample_manual: count zero and empty sets") {
  const GroundPlane plane = GroundPlane::from_height(1.5);
  Rng rng(1);
  CHECK(sample_manual(single_segment(), plane, 0, rng).empty());
  CHECK(sample_manual(TrajectorySet{}, plane, 0, rng).empty());
  CHECK(code_of([&] { sample_manual(TrajectorySet{}, plane, 1, rng); }) == ErrorCode::EmptyTrajectorySet);
}

TEST_CASE("sample_manual: arc-length weighting across segments of 10 and 30 m") {
  TrajectorySet t;
  t.polylines = {{Vec2(-5, 10), Vec2(-5, 20)}, {Vec2(5, 10), Vec2(5, 40)}};
  const GroundPlane plane = GroundPlane::from_height(1.5);
  Rng rng(99);
  std::vector<double> counts(2, 0.0);
  const int n = 10000;
  for (const PoseSample& p : sample_manual(t, plane, n, rng)) counts[p.position.x() > 0 ? 1 : 0] += 1;
  const std::vector<double> expected{0.25 * n, 0.75 * n};
  CHECK(oracles::chi_square_p(counts, expected) > 0.01);
  CHECK(counts[1] / n == Approx(0.75).epsilon(0.03));
}

TEST_CASE("sample_manual: yaw is parallel to the containing segment") {
  TrajectorySet t;
  t.polylines = {{Vec2(-3, 6), Vec2(-1, 12), Vec2(-1.5, 25), Vec2(4, 31)}};
  GroundPlane plane;
  plane.normal = Vec3(0.05, -1, 0.1).normalized();
  plane.offset = -1.7;
  Rng rng(31);
  for (const PoseSample& p : sample_manual(t, plane, 1000, rng)) {
    const Vec2 g = plane.plane_coords(p.position);
    REQUIRE(std::abs(plane.signed_distance(p.position)) < 1e-6);
    // Find the segment that contains g.
    double best = 1e9;
    double angle = 0;
    const auto& line = t.polylines[0];
    for (std::size_t i = 1; i < line.size(); ++i) {
      const Vec2 d = line[i] - line[i - 1];
      const double f = std::clamp((g - line[i - 1]).dot(d) / d.squaredNorm(), 0.0, 1.0);
      const double dist = (line[i - 1] + f * d - g).norm();
      if (dist < best) {
        best = dist;
        angle = std::atan2(d.x(), d.y());
      }
    }
    REQUIRE(best < 1e-9);
    REQUIRE(mod_pi_error(p.yaw, angle) < 1e-9);
  }
}

TEST_CASE("sample_manual flips direction about half the time") {
  Rng rng(8);
  int flipped = 0;
  const auto poses = sample_manual(single_segment(), GroundPlane::from_height(1.5), 4000, rng);
  for (const PoseSample& p : poses) flipped += std::abs(p.yaw - kPi) < 1e-9 ? 1 : 0;
  CHECK(flipped / 4000.0 == Approx(0.5).epsilon(0.06));
}

TEST_CASE("sample_road_mask: worked examples") {
  const CameraIntrinsics k = fixtures::intrinsics(101, 101, 40);
  const GroundPlane plane = GroundPlane::from_height(1.5);
  Rng rng(2);
  CHECK(code_of([&] { sample_road_mask(ImageGray8(101, 101, 0), k, plane, 1, rng); }) == ErrorCode::EmptyRoadMask);
  CHECK(code_of([&] { sample_road_mask(ImageGray8(100, 101, 0), k, plane, 1, rng); }) == ErrorCode::DimensionMismatch);

  ImageGray8 one(101, 101, 0);
  one(50, 90) = 1;  // (cx, cy + f)
  const auto poses = sample_road_mask(one, k, plane, 3, rng);
  REQUIRE(poses.size() == 3);
  for (const PoseSample& p : poses) {
    CHECK((p.position - Vec3(0, 1.5, 1.5)).norm() < 1e-12);
    CHECK(p.yaw >= 0.0);
    CHECK(p.yaw < 2 * kPi);
  }
  // A mask limited to the sky has no usable pixels.
  ImageGray8 sky(101, 101, 0);
  for (int x = 0; x < 101; ++x) sky(x, 10) = 255;
  CHECK(code_of([&] { sample_road_mask(sky, k, plane, 1, rng); }) == ErrorCode::EmptyRoadMask);
}

TEST_CASE("sample_road_mask: lower half mask gives on-plane points in front of the camera") {
  const CameraIntrinsics k = fixtures::intrinsics(120, 80, 90);
  GroundPlane plane;
  plane.normal = Vec3(0.02, -1, -0.03).normalized();
  plane.offset = -1.6;
  ImageGray8 mask(120, 80, 0);
  for (int y = 40; y < 80; ++y)
    for (int x = 0; x < 120; ++x) mask(x, y) = 255;
  Rng rng(5);
  for (const PoseSample& p : sample_road_mask(mask, k, plane, 1000, rng)) {
    REQUIRE(p.position.z() > 0.0);
    REQUIRE(std::abs(plane.signed_distance(p.position)) < 1e-6);
    const Vec2 px = project(p.position, k);
    REQUIRE(mask(static_cast<int>(std::lround(px.x())), static_cast<int>(std::lround(px.y()))) != 0);
  }
}

TEST_CASE("sample_road_mask draws pixels uniformly") {
  const CameraIntrinsics k = fixtures::intrinsics(40, 40, 30);
  const GroundPlane plane = GroundPlane::from_height(1.5);
  ImageGray8 mask(40, 40, 0);
  mask(5, 30) = mask(20, 35) = mask(33, 25) = 9;
  Rng rng(17);
  std::vector<double> counts(3, 0.0);
  for (const PoseSample& p : sample_road_mask(mask, k, plane, 3000, rng)) {
    const Vec2 px = project(p.position, k);
    counts[px.x() < 10 ? 0 : (px.x() < 25 ? 1 : 2)] += 1;
  }
  const std::vector<double> expected(3, 1000.0);
  CHECK(oracles::chi_square_p(counts, expected) > 0.01);
}

TEST_CASE("sample_ground_plane: bounds, determinism, uniform mean, cap") {
  PlacementRegion region{-4, 4, 5, 50, 100000};
  GroundPlane plane;
  plane.normal = Vec3(-0.04, -1, 0.02).normalized();
  plane.offset = -1.4;
  Rng a(3), b(3);
  const auto pa = sample_ground_plane(region, plane, 10000, a);
  const auto pb = sample_ground_plane(region, plane, 10000, b);
  REQUIRE(pa.size() == 10000);
  double sum_x = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    REQUIRE(pa[i].position == pb[i].position);
    REQUIRE(pa[i].yaw == pb[i].yaw);
    const Vec2 g = plane.plane_coords(pa[i].position);
    REQUIRE(g.x() >= -4 - 1e-12);
    REQUIRE(g.x() <= 4 + 1e-12);
    REQUIRE(g.y() >= 5 - 1e-12);
    REQUIRE(g.y() <= 50 + 1e-12);
    REQUIRE(std::abs(plane.signed_distance(pa[i].position)) < 1e-6);
    sum_x += g.x();
  }
  const double sigma = 8.0 / std::sqrt(12.0) / std::sqrt(10000.0);
  CHECK(std::abs(sum_x / 10000.0) < 5 * sigma);

  region.max_count = 3;
  Rng c(1);
  CHECK(sample_ground_plane(region, plane, 10, c).size() == 3);
  region.min_x = 5;
  CHECK_THROWS_AS(sample_ground_plane(region, plane, 1, c), Error);
}

TEST_CASE("sample_unconstrained: box, determinism, quaternion moments") {
  const VolumeBounds v{Vec3(-8, -2, 4), Vec3(8, 2, 60)};
  Rng a(12), b(12);
  CHECK(sample_unconstrained(v, 0, a).empty());
  const auto pa = sample_unconstrained(v, 10000, a);
  const auto pb = sample_unconstrained(v, 10000, b);
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    REQUIRE(pa[i].kind == PoseKind::free);
    REQUIRE((pa[i].position.array() >= v.min.array()).all());
    REQUIRE((pa[i].position.array() <= v.max.array()).all());
    REQUIRE(std::abs(pa[i].rotation.norm() - 1.0) < 1e-12);
    mean += pa[i].rotation.coeffs();
  }
  const auto pb2 = sample_unconstrained(v, 10000, b);
  CHECK(pb2.size() == 10000);
  CHECK(pa.size() == pb.size());
  mean /= 10000.0;
  // Uniform on S^3: each component has mean 0 and variance 1/4.
  const double sigma = 0.5 / std::sqrt(10000.0);
  for (int c = 0; c < 4; ++c) CHECK(std::abs(mean[c]) < 5 * sigma);
}

TEST_CASE("sample_unconstrained is deterministic") {
  const VolumeBounds v;
  Rng a(4), b(4);
  const auto x = sample_unconstrained(v, 50, a);
  const auto y = sample_unconstrained(v, 50, b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].position == y[i].position);
    CHECK(x[i].rotation.coeffs() == y[i].rotation.coeffs());
  }
}

TEST_CASE("filter_collisions: identical, distant and chained poses") {
  const auto car = fixtures::model_from_obj(fixtures::box_obj(2, 1.5, 2));
  const GroundPlane plane = GroundPlane::from_height(1.5);
  const CarModel* m = car.get();

  const std::vector<PoseSample> same{PoseSample::on_plane(plane, Vec2(0, 10), 0),
                                     PoseSample::on_plane(plane, Vec2(0, 10), 0)};
  const std::vector<const CarModel*> two{m, m};
  CHECK(filter_collisions(same, two, plane).size() == 1);

  const std::vector<PoseSample> apart{PoseSample::on_plane(plane, Vec2(0, 10), 0),
                                      PoseSample::on_plane(plane, Vec2(0, 20), 0)};
  CHECK(filter_collisions(apart, two, plane).size() == 2);

  // Each pose overlaps only its predecessor (1.5 m steps, 2 m footprints).
  std::vector<PoseSample> chain;
  for (int i = 0; i < 5; ++i) chain.push_back(PoseSample::on_plane(plane, Vec2(1.5 * i, 10), 0));
  const std::vector<const CarModel*> five(5, m);
  CHECK(collision_free_indices(chain, five, plane) == std::vector<std::size_t>{0, 2, 4});

  const std::vector<PoseSample> mixed{PoseSample::on_plane(plane, Vec2(0, 10), 0),
                                      PoseSample::free(Vec3(0, 1, 10), Eigen::Quaterniond::Identity())};
  CHECK(filter_collisions(mixed, two, plane).size() == 2);
  CHECK_THROWS_AS(filter_collisions(mixed, std::vector<const CarModel*>{m}, plane), Error);
}

TEST_CASE("filter_collisions output is pairwise disjoint for 1000 dense samples") {
  const auto car = fixtures::model_from_obj(fixtures::convex_car_obj());
  const GroundPlane plane = GroundPlane::from_height(1.6);
  Rng rng(6);
  const auto poses = sample_ground_plane(PlacementRegion{-8, 8, 4, 30, 1000}, plane, 1000, rng);
  const std::vector<const CarModel*> models(poses.size(), car.get());
  const auto kept = filter_collisions(poses, models, plane);
  CHECK(kept.size() > 5);
  CHECK(kept.size() < poses.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j)
      REQUIRE_FALSE(footprint(*car, kept[i], plane).intersects(footprint(*car, kept[j], plane)));
}
