#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "planar/camera_rig.hpp"
#include "planar/depth_frame.hpp"

namespace planar {

/// Camera-frame point set in millimeters. source_pixels carries the linear
/// pixel index each point came from when the cloud was lifted from a depth
/// frame (empty otherwise); segmentation metrics use it to map inliers back
/// onto the image grid.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<std::int32_t> source_pixels;
};

/// One point per nonzero pixel via undistortion + range unprojection.
PointCloud depth_to_point_cloud(const DepthFrame& frame, const CameraRig& rig);

}  // namespace planar
