#include "planar/geometry.hpp"

#include <cmath>
#include <string>

#include "planar/errors.hpp"

namespace planar {

CameraPoint unproject(const ImagePlanePoint& p, double depth_mm) {
  if (!(depth_mm > 0.0)) {
    throw ConfigError("unproject: depth must be positive, got " + std::to_string(depth_mm));
  }
  const double inv_norm = 1.0 / std::sqrt(p.u * p.u + p.v * p.v + 1.0);
  return CameraPoint(-p.u, -p.v, 1.0) * (depth_mm * inv_norm);
}

WorldPoint to_world(const CameraRig& rig, const CameraPoint& p) {
  const Eigen::Vector4d h = rig.cam_to_world * Eigen::Vector4d(p.x(), p.y(), p.z(), 1.0);
  return h.head<3>() / h.w();
}

PlanePose estimate_pose_size(const std::array<WorldPoint, 4>& corners) {
  PlanePose pose;
  pose.center = (corners[0] + corners[1] + corners[2] + corners[3]) / 4.0;

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  double spread2 = 0.0;
  for (const auto& c : corners) {
    const Eigen::Vector3d d = c - pose.center;
    scatter += d * d.transpose();
    spread2 = std::max(spread2, d.squaredNorm());
  }
  if (spread2 <= 0.0) {
    throw PipelineError(ErrorCode::DegenerateGeometry, "pose",
                        "estimate_pose_size: all corners coincide");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  // Eigenvalues ascending: [0] is the out-of-plane direction, [1] must carry
  // real in-plane extent or the corners are collinear/duplicated.
  const double planar_spread = eig.eigenvalues()(1);
  if (planar_spread <= 1e-9 * spread2) {
    throw PipelineError(ErrorCode::DegenerateGeometry, "pose",
                        "estimate_pose_size: corners are collinear or duplicated");
  }
  pose.normal = eig.eigenvectors().col(0).normalized();

  double ss = 0.0;
  std::array<Eigen::Vector3d, 4> in_plane;
  for (int i = 0; i < 4; ++i) {
    const double off = (corners[static_cast<std::size_t>(i)] - pose.center).dot(pose.normal);
    ss += off * off;
    in_plane[static_cast<std::size_t>(i)] =
        corners[static_cast<std::size_t>(i)] - off * pose.normal;
  }
  pose.rms_planarity = std::sqrt(ss / 4.0);

  // Corners arrive in outline order, so opposite sides are (0-1, 2-3) and (1-2, 3-0).
  pose.edge_u = 0.5 * ((in_plane[1] - in_plane[0]).norm() + (in_plane[3] - in_plane[2]).norm());
  pose.edge_v = 0.5 * ((in_plane[2] - in_plane[1]).norm() + (in_plane[0] - in_plane[3]).norm());
  if (!(pose.edge_u > 0.0) || !(pose.edge_v > 0.0)) {
    throw PipelineError(ErrorCode::DegenerateGeometry, "pose",
                        "estimate_pose_size: zero-length side");
  }
  return pose;
}

}  // namespace planar
