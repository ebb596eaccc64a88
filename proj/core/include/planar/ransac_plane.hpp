#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "planar/point_cloud.hpp"

namespace planar {

/// Plane n . x = offset with unit normal.
struct PlaneModel {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;  // mm

  double distance(const Eigen::Vector3d& p) const { return std::abs(normal.dot(p) - offset); }
};

struct RansacPlaneResult {
  PlaneModel plane;
  std::vector<std::uint8_t> inliers;  // one flag per cloud point
  std::size_t inlier_count = 0;
  int best_round = -1;
};

/// Plane segmentation by random 3-point sampling: keep the max-inlier
/// candidate (ties to the earlier round), refit by least squares over its
/// inliers, return the refit only if it does not lose inliers. Per-round
/// RNG streams derive from the seed, so the result is independent of
/// evaluation order. Throws PipelineError(RansacNoPlane) when every sampled
/// triple is collinear.
RansacPlaneResult ransac_plane(const PointCloud& cloud, double inlier_threshold_mm,
                               int iterations, std::uint64_t seed);

}  // namespace planar
