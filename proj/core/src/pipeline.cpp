#include "planar/pipeline.hpp"

#include <chrono>

namespace planar {

TargetResult track_target(const DepthFrame& frame, const CameraRig& rig,
                          const TrackerConfig& cfg) {
  TargetResult result;

  const TrackResult tracked = track(frame, cfg);
  result.status = tracked.status;
  result.failed_step = tracked.failed_step;
  result.tracker_timings = tracked.timings;
  result.patch_pixels_visited = tracked.patch_pixels_visited;
  if (!tracked.ok()) {
    result.latency_ms = tracked.timings.total_ms;
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    for (std::size_t i = 0; i < 4; ++i) {
      const Eigen::Vector2d& px = tracked.quad.corners[i];
      const ImagePlanePoint ip = pixel_to_image_plane(rig, px.x(), px.y());
      result.target.camera_corners[i] = unproject(ip, tracked.quad.depths[i]);
      result.target.world_corners[i] = to_world(rig, result.target.camera_corners[i]);
    }
  } catch (const PipelineError& e) {
    result.status = e.code();
    result.failed_step = e.step();
    result.latency_ms = tracked.timings.total_ms;
    return result;
  }
  const double geometry_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  result.latency_ms = tracked.timings.total_ms + geometry_ms;

  result.target.pixel_corners = tracked.quad.corners;
  result.target.depths = tracked.quad.depths;
  try {
    result.target.pose = estimate_pose_size(result.target.world_corners);
  } catch (const PipelineError& e) {
    result.status = e.code();
    result.failed_step = e.step();
  }
  return result;
}

}  // namespace planar
