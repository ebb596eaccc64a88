#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "planar/baseline_eval.hpp"
#include "planar/errors.hpp"
#include "planar/kdtree.hpp"
#include "planar/render.hpp"
#include "planar/rng.hpp"

using namespace planar;

namespace {

CameraRig small_rig(double dist = 500.0) {
  CameraRig rig;
  rig.width = 160;
  rig.height = 140;
  rig.fx = rig.fy = 140.0;
  rig.cx = (rig.width - 1) / 2.0;
  rig.cy = (rig.height - 1) / 2.0;
  rig.cam_to_world =
      look_at(Eigen::Vector3d(0, 0, dist), Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY());
  return rig;
}

PointCloud random_cloud(Rng& rng, std::size_t n, double extent = 300.0) {
  PointCloud cloud;
  for (std::size_t i = 0; i < n; ++i) {
    cloud.points.emplace_back(rng.uniform(-extent, extent), rng.uniform(-extent, extent),
                              rng.uniform(-extent, extent));
  }
  return cloud;
}

}  // namespace

TEST_CASE("cloud: all-zero frame converts to an empty cloud") {
  const PointCloud cloud = depth_to_point_cloud(DepthFrame::filled(8, 8, 0), small_rig());
  CHECK(cloud.points.empty());
}

TEST_CASE("cloud: principal-point pixel at depth 500 lands on the optical axis") {
  CameraRig rig = small_rig();
  rig.cx = 4.0;
  rig.cy = 4.0;
  std::vector<std::uint16_t> depths(81, 0);
  depths[4 * 9 + 4] = 500;
  const PointCloud cloud = depth_to_point_cloud(DepthFrame(9, 9, depths), rig);
  REQUIRE(cloud.points.size() == 1);
  CHECK((cloud.points[0] - Eigen::Vector3d(0, 0, 500)).norm() <= 1e-12);
  CHECK(cloud.source_pixels[0] == 4 * 9 + 4);
}

TEST_CASE("cloud: point count equals nonzero pixel count") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 4 + static_cast<int>(rng.uniform_index(30));
    const int h = 4 + static_cast<int>(rng.uniform_index(30));
    std::vector<std::uint16_t> depths(static_cast<std::size_t>(w) * h, 0);
    std::size_t nonzero = 0;
    for (auto& d : depths) {
      if (rng.uniform01() < 0.3) {
        d = static_cast<std::uint16_t>(1 + rng.uniform_index(900));
        ++nonzero;
      }
    }
    CameraRig rig = small_rig();
    rig.width = w;
    rig.height = h;
    const PointCloud cloud = depth_to_point_cloud(DepthFrame(w, h, depths), rig);
    CHECK(cloud.points.size() == nonzero);
  }
}

TEST_CASE("cloud: fronto-parallel plane frame stays within quantization of z=500") {
  const CameraRig rig = small_rig(500.0);
  SceneSpec spec;
  spec.arm_enabled = false;
  const auto [frame, truth] = render_scene(spec, rig, NoiseSpec{});
  const PointCloud cloud = depth_to_point_cloud(frame, rig);
  REQUIRE(cloud.points.size() == truth.po_mask.count());
  // Camera at world (0,0,500) facing the z=0 plane: camera-frame z is the
  // distance toward the plane.
  for (const auto& p : cloud.points) {
    CHECK(std::abs(p.z() - 500.0) <= 0.5 + 1e-6);
  }
}

TEST_CASE("kdtree: exact match with brute force on 2000 points") {
  Rng rng(5);
  const PointCloud cloud = random_cloud(rng, 2000);
  const KdTree3 tree(cloud.points);
  for (int q = 0; q < 500; ++q) {
    const Eigen::Vector3d query(rng.uniform(-350, 350), rng.uniform(-350, 350),
                                rng.uniform(-350, 350));
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      const double d2 = (cloud.points[i] - query).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = static_cast<int>(i);
      }
    }
    CHECK(tree.nearest(query) == best);
  }
}

TEST_CASE("icp: registering a cloud onto itself is a fixed point") {
  Rng rng(7);
  const PointCloud cloud = random_cloud(rng, 400);
  const IcpResult res = icp_point_to_point(cloud, cloud, Eigen::Matrix4d::Identity());
  CHECK(res.rms <= 1e-12);
  CHECK((res.transform - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("icp: recovers a 5 mm translation to 0.1 mm") {
  Rng rng(9);
  const PointCloud model = random_cloud(rng, 600);
  PointCloud target = model;
  const Eigen::Vector3d shift(5.0, -2.0, 3.0);
  for (auto& p : target.points) p += shift;

  const IcpResult res = icp_point_to_point(model, target, Eigen::Matrix4d::Identity());
  CHECK(res.rms < 0.1);
  CHECK((res.transform.topRightCorner<3, 1>() - shift).norm() < 0.1);
}

TEST_CASE("icp: rms history is monotone non-increasing on random problems") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud model = random_cloud(rng, 200);
    PointCloud target = random_cloud(rng, 300);
    Eigen::Matrix4d init = Eigen::Matrix4d::Identity();
    init.topRightCorner<3, 1>() = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()) * 20.0;

    const IcpResult res = icp_point_to_point(model, target, init, 30, 1e-9);
    for (std::size_t i = 1; i < res.rms_history.size(); ++i) {
      CHECK(res.rms_history[i] <= res.rms_history[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("icp: collinear geometry raises the degenerate error") {
  PointCloud line;
  for (int i = 0; i < 50; ++i) line.points.emplace_back(static_cast<double>(i), 0.0, 0.0);
  try {
    icp_point_to_point(line, line, Eigen::Matrix4d::Identity());
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::IcpDegenerate);
  }

  PointCloud two;
  two.points = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones()};
  CHECK_THROWS_AS(icp_point_to_point(two, two, Eigen::Matrix4d::Identity()), PipelineError);
}

TEST_CASE("ransac: noiseless plane makes every point an inlier") {
  PointCloud cloud;
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 30; ++x) {
      cloud.points.emplace_back(x * 10.0 - 150.0, y * 10.0 - 150.0, 500.0);
    }
  }
  const RansacPlaneResult res = ransac_plane(cloud, 1.0, 100, 42);
  CHECK(res.inlier_count == cloud.points.size());
  CHECK(std::abs(std::abs(res.plane.normal.z()) - 1.0) <= 1e-9);
}

TEST_CASE("ransac: plane with 10% far outliers recovers the normal within 1 degree") {
  Rng rng(13);
  PointCloud cloud;
  const Eigen::Vector3d n = Eigen::Vector3d(0.2, -0.1, 1.0).normalized();
  for (int i = 0; i < 900; ++i) {
    const double x = rng.uniform(-200, 200);
    const double y = rng.uniform(-200, 200);
    // Plane n.p = 400.
    const double z = (400.0 - n.x() * x - n.y() * y) / n.z();
    cloud.points.emplace_back(x, y, z);
  }
  for (int i = 0; i < 100; ++i) {
    cloud.points.emplace_back(rng.uniform(-200, 200), rng.uniform(-200, 200),
                              rng.uniform(600, 900));
  }
  const RansacPlaneResult res = ransac_plane(cloud, 2.0, 300, 7);
  const double cos_angle = std::abs(res.plane.normal.dot(n));
  CHECK(cos_angle >= std::cos(1.0 * 3.14159265358979324 / 180.0));
  CHECK(res.inlier_count >= 900);
}

TEST_CASE("ransac: identical seeds give identical results") {
  Rng rng(17);
  const PointCloud cloud = random_cloud(rng, 400);
  const RansacPlaneResult a = ransac_plane(cloud, 10.0, 150, 99);
  const RansacPlaneResult b = ransac_plane(cloud, 10.0, 150, 99);
  CHECK(a.plane.normal == b.plane.normal);
  CHECK(a.plane.offset == b.plane.offset);
  CHECK(a.inliers == b.inliers);
  CHECK(a.best_round == b.best_round);
}

TEST_CASE("ransac: all-collinear cloud exhausts the budget") {
  PointCloud line;
  for (int i = 0; i < 40; ++i) line.points.emplace_back(static_cast<double>(i), 2.0, 3.0);
  try {
    ransac_plane(line, 1.0, 50, 1);
    FAIL("expected PipelineError");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::RansacNoPlane);
  }
}

TEST_CASE("model cloud: roughly the requested density with corners included") {
  const PointCloud model = sample_plane_model_cloud(300.0, 240.0, 10000);
  CHECK(model.points.size() > 9000);
  CHECK(model.points.size() < 11500);
  bool corner_found = false;
  for (const auto& p : model.points) {
    if ((p - Eigen::Vector3d(-150.0, -120.0, 0.0)).norm() <= 1e-9) corner_found = true;
  }
  CHECK(corner_found);
}

TEST_CASE("evaluate_baselines: zero-noise sanity on a small set") {
  const SceneSpec spec = [] {
    SceneSpec s;
    s.arm_enabled = false;
    return s;
  }();
  const CameraRig rig = small_rig(520.0);
  OrbitParams params;
  params.count = 3;
  params.dist_min_mm = 450.0;
  params.dist_max_mm = 600.0;
  params.max_azimuth_deg = 10.0;
  params.max_elevation_deg = 8.0;
  params.gaze_drop_mm = 0.0;
  params.seed = 5;
  const auto poses = orbit_trajectory(spec, rig, params);
  const auto rendered = render_sequence(spec, rig, NoiseSpec{}, poses, 1);

  std::vector<DepthFrame> frames;
  std::vector<SceneTruth> truths;
  std::vector<CameraRig> rigs;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    frames.push_back(rendered[i].frame);
    truths.push_back(rendered[i].truth);
  }

  // Per-frame rigs: evaluate one pose at a time (the API takes one rig).
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CameraRig posed = rig;
    posed.cam_to_world = poses[i];

    BaselineOptions icp_opt;
    icp_opt.method = BaselineMethod::Icp;
    const auto icp_rows = evaluate_baselines({frames[i]}, {truths[i]}, {posed}, icp_opt);
    REQUIRE(icp_rows.size() == 1);
    CHECK(icp_rows[0].status == ErrorCode::Ok);
    CHECK(icp_rows[0].accuracy_value < 1.0);

    BaselineOptions ransac_opt;
    ransac_opt.method = BaselineMethod::Ransac;
    ransac_opt.include_tracker_dice = false;
    const auto rows = evaluate_baselines({frames[i]}, {truths[i]}, {posed}, ransac_opt);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == ErrorCode::Ok);
    CHECK(rows[0].accuracy_value >= 0.99);
  }
}
