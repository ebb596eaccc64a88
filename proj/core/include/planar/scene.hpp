#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "planar/camera_rig.hpp"
#include "planar/mask.hpp"

namespace planar {

enum class BackgroundMode {
  NoReturn,  // background pixels read 0
  Far,       // background plane at 1100 mm, past the tracking threshold
};

struct ClutterSphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // world mm
  double radius = 0.0;                               // mm
};

/// Synthetic scene description: a rectangular planar target, an optional arm
/// capsule hanging from its bottom edge, and optional clutter spheres.
struct SceneSpec {
  double plane_width = 300.0;   // mm
  double plane_height = 240.0;  // mm
  Eigen::Matrix4d plane_pose = Eigen::Matrix4d::Identity();  // plane local -> world
  bool arm_enabled = true;
  double arm_radius = 40.0;  // mm
  BackgroundMode background_mode = BackgroundMode::NoReturn;
  std::vector<ClutterSphere> clutter;

  void validate() const;

  /// Plane corner positions in world space, outline order starting at the
  /// local (-w/2, -h/2) corner: bottom-left, bottom-right, top-right, top-left.
  std::array<Eigen::Vector3d, 4> world_corners() const;
};

/// Sensor noise model applied after rendering.
struct NoiseSpec {
  double sigma = 0.0;                 // per-pixel Gaussian sigma, mm
  double boundary_sigma_scale = 1.0;  // multiplier within 3 px of a depth discontinuity
  double dropout_prob = 0.0;          // probability a nonzero pixel reads 0
  std::uint64_t seed = 0;

  void validate() const;
};

/// Exact ground truth for one rendered frame.
struct SceneTruth {
  std::array<Eigen::Vector3d, 4> world_corners{};   // mm, outline order
  std::array<Eigen::Vector2d, 4> pixel_corners{};   // exact projections
  BinaryMask po_mask;                               // pixels whose nearest hit is the plane
};

/// Scene and noise specs load from the same JSON key/value format as the rig.
SceneSpec load_scene_spec(const std::filesystem::path& path);
void save_scene_spec(const SceneSpec& spec, const std::filesystem::path& path);
NoiseSpec load_noise_spec(const std::filesystem::path& path);

/// Truth sidecar: keys world_corners (12 reals), pixel_corners (8 reals),
/// po_mask_path (PGM relative to the sidecar). save writes the mask PGM too.
void save_scene_truth(const SceneTruth& truth, const std::filesystem::path& json_path,
                      const std::filesystem::path& mask_path);
SceneTruth load_scene_truth(const std::filesystem::path& json_path);

}  // namespace planar
