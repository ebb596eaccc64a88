#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "planar/errors.hpp"
#include "planar/geometry.hpp"
#include "planar/rng.hpp"

using namespace planar;

namespace {

Eigen::Matrix4d random_rigid(Rng& rng, double translation_scale = 500.0) {
  const Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = q.normalized().toRotationMatrix();
  m.topRightCorner<3, 1>() =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()) * translation_scale;
  return m;
}

}  // namespace

TEST_CASE("unproject: optical axis case is exact") {
  const CameraPoint p = unproject(ImagePlanePoint{0.0, 0.0}, 500.0);
  CHECK(p.x() == 0.0);
  CHECK(p.y() == 0.0);
  CHECK(p.z() == 500.0);
}

TEST_CASE("unproject: off-axis substitution") {
  const CameraPoint p = unproject(ImagePlanePoint{1.0, 0.0}, 100.0 * std::sqrt(2.0));
  CHECK(p.x() == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(p.y() == doctest::Approx(0.0));
  CHECK(p.z() == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("unproject: norm preservation over random inputs") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const ImagePlanePoint ip{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const double depth = rng.uniform(1.0, 5000.0);
    const CameraPoint p = unproject(ip, depth);
    CHECK(std::abs(p.norm() - depth) <= 1e-9 * depth);
  }
}

TEST_CASE("unproject: non-positive depth is an error") {
  CHECK_THROWS(unproject(ImagePlanePoint{0.1, 0.2}, 0.0));
  CHECK_THROWS(unproject(ImagePlanePoint{0.1, 0.2}, -5.0));
}

TEST_CASE("unproject then forward projection recovers the image-plane point") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const ImagePlanePoint ip{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const double depth = rng.uniform(10.0, 3000.0);
    const CameraPoint p = unproject(ip, depth);
    CHECK(std::abs(-p.x() / p.z() - ip.u) <= 1e-9);
    CHECK(std::abs(-p.y() / p.z() - ip.v) <= 1e-9);
  }
}

TEST_CASE("to_world: identity and pure translation") {
  CameraRig rig;
  rig.width = rig.height = 10;
  rig.fx = rig.fy = 1.0;

  CHECK(to_world(rig, CameraPoint(1.0, 2.0, 3.0)) == WorldPoint(1.0, 2.0, 3.0));

  rig.cam_to_world.topRightCorner<3, 1>() = Eigen::Vector3d(10.0, 20.0, 30.0);
  const WorldPoint w = to_world(rig, CameraPoint(0.0, 0.0, 500.0));
  CHECK(w == WorldPoint(10.0, 20.0, 530.0));
}

TEST_CASE("to_world: rigid transforms preserve pairwise corner distances") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    CameraRig rig;
    rig.width = rig.height = 10;
    rig.fx = rig.fy = 1.0;
    rig.cam_to_world = random_rigid(rng);

    std::array<CameraPoint, 4> pts;
    for (auto& p : pts) p = CameraPoint(rng.normal(), rng.normal(), rng.normal()) * 300.0;
    std::array<WorldPoint, 4> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = to_world(rig, pts[i]);

    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        const double before = (pts[i] - pts[j]).norm();
        const double after = (out[i] - out[j]).norm();
        CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, before));
      }
    }
  }
}

TEST_CASE("estimate_pose_size: exact unit square") {
  const std::array<WorldPoint, 4> square = {
      WorldPoint(0, 0, 0), WorldPoint(1, 0, 0), WorldPoint(1, 1, 0), WorldPoint(0, 1, 0)};
  const PlanePose pose = estimate_pose_size(square);
  CHECK(pose.center == WorldPoint(0.5, 0.5, 0.0));
  CHECK(std::abs(std::abs(pose.normal.z()) - 1.0) <= 1e-12);
  CHECK(pose.edge_u == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pose.edge_v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pose.rms_planarity == doctest::Approx(0.0));
}

TEST_CASE("estimate_pose_size: translation moves the center only") {
  const std::array<WorldPoint, 4> square = {
      WorldPoint(0, 0, 0), WorldPoint(1, 0, 0), WorldPoint(1, 1, 0), WorldPoint(0, 1, 0)};
  const Eigen::Vector3d t(5.0, -3.0, 2.0);
  std::array<WorldPoint, 4> moved;
  for (std::size_t i = 0; i < 4; ++i) moved[i] = square[i] + t;

  const PlanePose a = estimate_pose_size(square);
  const PlanePose b = estimate_pose_size(moved);
  CHECK((b.center - (a.center + t)).norm() <= 1e-12);
  CHECK(std::abs(std::abs(b.normal.dot(a.normal)) - 1.0) <= 1e-12);
  CHECK(b.edge_u == doctest::Approx(a.edge_u).epsilon(1e-12));
  CHECK(b.edge_v == doctest::Approx(a.edge_v).epsilon(1e-12));
}

TEST_CASE("estimate_pose_size: equivariant under rigid motion") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    // A generic planar-ish quad with some out-of-plane wobble.
    std::array<WorldPoint, 4> quad = {
        WorldPoint(rng.uniform(-10, 0), rng.uniform(-10, 0), rng.uniform(-0.5, 0.5)),
        WorldPoint(rng.uniform(50, 80), rng.uniform(-10, 0), rng.uniform(-0.5, 0.5)),
        WorldPoint(rng.uniform(50, 80), rng.uniform(40, 60), rng.uniform(-0.5, 0.5)),
        WorldPoint(rng.uniform(-10, 0), rng.uniform(40, 60), rng.uniform(-0.5, 0.5))};

    const Eigen::Matrix4d m = random_rigid(rng, 100.0);
    std::array<WorldPoint, 4> moved;
    for (std::size_t i = 0; i < 4; ++i) {
      moved[i] = (m * quad[i].homogeneous()).head<3>();
    }

    const PlanePose a = estimate_pose_size(quad);
    const PlanePose b = estimate_pose_size(moved);

    const Eigen::Vector3d center_expected = (m * a.center.homogeneous()).head<3>();
    const Eigen::Vector3d normal_expected = m.topLeftCorner<3, 3>() * a.normal;
    CHECK((b.center - center_expected).norm() <= 1e-9 * std::max(1.0, center_expected.norm()));
    CHECK(std::abs(std::abs(b.normal.dot(normal_expected)) - 1.0) <= 1e-9);
    CHECK(std::abs(b.edge_u - a.edge_u) <= 1e-9 * a.edge_u);
    CHECK(std::abs(b.edge_v - a.edge_v) <= 1e-9 * a.edge_v);
    CHECK(std::abs(b.rms_planarity - a.rms_planarity) <= 1e-9 * std::max(1.0, a.rms_planarity));
  }
}

TEST_CASE("estimate_pose_size: nominal plane dimensions from exact corners") {
  const double hw = 150.0, hh = 120.0;  // 300 x 240 target
  const std::array<WorldPoint, 4> corners = {
      WorldPoint(-hw, -hh, 0), WorldPoint(hw, -hh, 0), WorldPoint(hw, hh, 0),
      WorldPoint(-hw, hh, 0)};
  const PlanePose pose = estimate_pose_size(corners);
  CHECK(pose.edge_u == doctest::Approx(300.0).epsilon(1e-9));
  CHECK(pose.edge_v == doctest::Approx(240.0).epsilon(1e-9));
}

TEST_CASE("estimate_pose_size: degenerate corners are rejected") {
  const std::array<WorldPoint, 4> collinear = {
      WorldPoint(0, 0, 0), WorldPoint(1, 1, 1), WorldPoint(2, 2, 2), WorldPoint(3, 3, 3)};
  try {
    estimate_pose_size(collinear);
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::DegenerateGeometry);
  }

  const std::array<WorldPoint, 4> coincident = {
      WorldPoint(1, 2, 3), WorldPoint(1, 2, 3), WorldPoint(1, 2, 3), WorldPoint(1, 2, 3)};
  CHECK_THROWS_AS(estimate_pose_size(coincident), PipelineError);
}
