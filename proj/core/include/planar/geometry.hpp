#pragma once

#include <Eigen/Dense>
#include <array>

#include "planar/camera_rig.hpp"

namespace planar {

/// Millimeter point in the depth-camera frame (z forward, x toward image
/// left, y toward image up; see pixel_to_image_plane for the convention).
using CameraPoint = Eigen::Vector3d;

/// Millimeter point in the world frame.
using WorldPoint = Eigen::Vector3d;

/// Fitted pose and size of the tracked plane.
struct PlanePose {
  WorldPoint center = WorldPoint::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double edge_u = 0.0;          // mean length of the (0-1) and (2-3) sides, mm
  double edge_v = 0.0;          // mean length of the (1-2) and (3-0) sides, mm
  double rms_planarity = 0.0;   // RMS out-of-plane residual, mm
};

/// Range measurement + image-plane direction -> camera-frame point. The
/// result's Euclidean norm equals the depth: the sensor reports distance from
/// the aperture, not z. Throws ConfigError for depth <= 0.
CameraPoint unproject(const ImagePlanePoint& p, double depth_mm);

/// Homogeneous product of cam_to_world with the point.
WorldPoint to_world(const CameraRig& rig, const CameraPoint& p);

/// Centroid + least-squares plane fit over 4 corners in outline order.
/// Throws PipelineError(DegenerateGeometry) for collinear/duplicate corners.
PlanePose estimate_pose_size(const std::array<WorldPoint, 4>& corners);

}  // namespace planar
