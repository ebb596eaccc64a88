// Microbenchmarks for the hot paths: the full tracker at several patch sizes,
// its individual stages, depth->cloud conversion, and one ICP iteration load.
// Run manually: build/benchmarks/planar_benchmarks

#include <benchmark/benchmark.h>

#include "planar/baseline_eval.hpp"
#include "planar/icp.hpp"
#include "planar/pipeline.hpp"
#include "planar/point_cloud.hpp"
#include "planar/render.hpp"

namespace {

using namespace planar;

CameraRig bench_rig() {
  CameraRig rig;
  rig.width = 488;
  rig.height = 450;
  rig.fx = rig.fy = 350.0;
  rig.cx = 243.5;
  rig.cy = 224.5;
  return rig;
}

struct Fixture {
  CameraRig rig;
  DepthFrame frame;
  SceneTruth truth;

  Fixture() : rig(bench_rig()), frame(1, 1, {0}) {
    SceneSpec spec;  // 300x240 target with the arm
    OrbitParams orbit;
    orbit.count = 1;
    orbit.dist_min_mm = 520.0;
    orbit.dist_max_mm = 520.0;
    orbit.seed = 7;
    const auto poses = orbit_trajectory(spec, rig, orbit);
    rig.cam_to_world = poses[0];
    NoiseSpec noise;
    noise.sigma = 1.8;
    noise.boundary_sigma_scale = 3.0;
    noise.dropout_prob = 0.005;
    auto rendered = render_scene(spec, rig, noise);
    frame = std::move(rendered.frame);
    truth = std::move(rendered.truth);
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_TrackFrame(benchmark::State& state) {
  TrackerConfig cfg;
  cfg.patch_size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(track(fixture().frame, cfg));
  }
}
BENCHMARK(BM_TrackFrame)->Arg(1)->Arg(5)->Arg(13);

void BM_TrackToWorld(benchmark::State& state) {
  const TrackerConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(track_target(fixture().frame, fixture().rig, cfg));
  }
}
BENCHMARK(BM_TrackToWorld);

void BM_Trim(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(trim(fixture().frame));
  }
}
BENCHMARK(BM_Trim);

void BM_ExtractOutlines(benchmark::State& state) {
  const TrackerConfig cfg;
  const auto trimmed = trim(fixture().frame);
  const BinaryMask mask = threshold_mask(trimmed.frame, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_outlines(mask));
  }
}
BENCHMARK(BM_ExtractOutlines);

void BM_DepthToPointCloud(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(depth_to_point_cloud(fixture().frame, fixture().rig));
  }
}
BENCHMARK(BM_DepthToPointCloud);

void BM_IcpRegister(benchmark::State& state) {
  const PointCloud cloud = depth_to_point_cloud(fixture().frame, fixture().rig);
  const PointCloud model = sample_plane_model_cloud(300.0, 240.0, 10000);
  const Eigen::Matrix4d init =
      fixture().rig.world_to_cam() * Eigen::Matrix4d::Identity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(icp_point_to_point(model, cloud, init, 10, 1e-3));
  }
}
BENCHMARK(BM_IcpRegister);

}  // namespace

BENCHMARK_MAIN();
