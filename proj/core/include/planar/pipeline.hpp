#pragma once

#include "planar/camera_rig.hpp"
#include "planar/geometry.hpp"
#include "planar/tracker.hpp"

namespace planar {

/// Tracker corners carried through every representation: pixel, depth,
/// camera frame, world frame, plus the fitted pose/size.
struct TrackedPlanarTarget {
  std::array<Eigen::Vector2d, 4> pixel_corners{};
  std::array<double, 4> depths{};
  std::array<CameraPoint, 4> camera_corners{};
  std::array<WorldPoint, 4> world_corners{};
  PlanePose pose{};
};

struct TargetResult {
  ErrorCode status = ErrorCode::Ok;
  std::string failed_step;
  TrackedPlanarTarget target{};  // valid only when status == Ok
  StepTimings tracker_timings{};
  /// Wall time from tracker entry to world-space corners (frame decode and
  /// pose/size fitting excluded); the figure the latency criteria talk about.
  double latency_ms = 0.0;
  long long patch_pixels_visited = 0;

  bool ok() const { return status == ErrorCode::Ok; }
};

/// track() plus unprojection to camera/world space and pose estimation.
TargetResult track_target(const DepthFrame& frame, const CameraRig& rig,
                          const TrackerConfig& cfg);

}  // namespace planar
