#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "planar/camera_rig.hpp"
#include "planar/depth_frame.hpp"
#include "planar/scene.hpp"

namespace planar {

struct RenderedFrame {
  DepthFrame frame;
  SceneTruth truth;
};

/// Ray-casts the scene through the rig: per pixel, depth is the distance from
/// the aperture to the nearest primitive hit, rounded half-up to integer mm,
/// then the noise model is applied. Throws ConfigError when the plane is fully
/// outside the frustum.
RenderedFrame render_scene(const SceneSpec& spec, const CameraRig& rig, const NoiseSpec& noise);

/// One frame per trajectory pose (cam_to_world per frame); frame i uses noise
/// seed seed+i so frames are independent but reproducible. threads > 1 renders
/// frames in parallel; output is ordered by index either way.
std::vector<RenderedFrame> render_sequence(const SceneSpec& spec, const CameraRig& rig,
                                           const NoiseSpec& noise,
                                           const std::vector<Eigen::Matrix4d>& trajectory,
                                           int threads = 1);

/// Gaussian depth noise with a stronger band near depth discontinuities plus
/// dropout. Zero pixels stay zero; perturbed pixels are clamped to >= 1 and
/// rounded. Deterministic per seed.
DepthFrame inject_noise(const DepthFrame& frame, const NoiseSpec& noise);

/// Pixels within Chebyshev distance 3 of a depth discontinuity (neighbor gap
/// > 20 mm or a nonzero/zero silhouette edge). Exposed for tests.
std::vector<std::uint8_t> boundary_band(const DepthFrame& frame);

struct OrbitParams {
  int count = 100;
  double dist_min_mm = 300.0;
  double dist_max_mm = 900.0;
  double max_azimuth_deg = 25.0;
  double max_elevation_deg = 15.0;
  double gaze_drop_mm = 50.0;  // gaze below plane center, keeps the target high in frame
  int margin_px = 12;
  std::uint64_t seed = 0;
};

/// Deterministic camera orbit around the plane, gazing near its center.
/// Every pose is adjusted until all four corners project inside the frame
/// margin and the plane's bottom edge stays clear of the frame bottom, so a
/// clean render is trackable on every pose.
std::vector<Eigen::Matrix4d> orbit_trajectory(const SceneSpec& spec, const CameraRig& rig,
                                              const OrbitParams& params);

/// Right-handed look-at: camera z toward target, y roughly along up_hint.
Eigen::Matrix4d look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                        const Eigen::Vector3d& up_hint);

}  // namespace planar
