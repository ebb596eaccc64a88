#pragma once

#include <Eigen/Dense>
#include <optional>

namespace planar {

/// Undistorted point on the normalized image plane at unit focal distance.
/// The third coordinate is fixed at -1 by convention and not stored.
struct ImagePlanePoint {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole intrinsics with two-term radial distortion plus the camera-to-world
/// rigid transform. The rotation block is orthonormal with determinant +1
/// (loaders re-orthonormalize after validating, see load_camera_rig).
struct CameraRig {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  Eigen::Matrix4d cam_to_world = Eigen::Matrix4d::Identity();

  Eigen::Matrix3d rotation() const { return cam_to_world.topLeftCorner<3, 3>(); }
  Eigen::Vector3d translation() const { return cam_to_world.topRightCorner<3, 1>(); }

  /// World-to-camera inverse, cheap because the transform is rigid.
  Eigen::Matrix4d world_to_cam() const;

  /// Throws ConfigError if intrinsics or the transform violate invariants.
  void validate(double rigid_tol = 1e-9) const;
};

/// Max-norm of R^T R - I; the rigidity measure used by rig validation.
double orthonormality_error(const Eigen::Matrix3d& r);

/// Nearest rotation matrix in the Frobenius sense (SVD projection).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& r);

/// Radial distortion forward model on normalized coordinates.
inline Eigen::Vector2d distort(const CameraRig& rig, const Eigen::Vector2d& p) {
  const double r2 = p.squaredNorm();
  return p * (1.0 + rig.k1 * r2 + rig.k2 * r2 * r2);
}

/// Pixel -> undistorted image-plane point, inverting the distortion by
/// fixed-point iteration. Throws PipelineError on non-convergence (pathological
/// k1/k2) rather than returning a silently wrong answer.
ImagePlanePoint pixel_to_image_plane(const CameraRig& rig, double u, double v);

/// Camera-space point -> pixel through the forward model. Returns nullopt for
/// points at or behind the aperture (z <= 0). The image-plane axis convention
/// matches pixel_to_image_plane: u right of center means negative camera x.
std::optional<Eigen::Vector2d> project_to_pixel(const CameraRig& rig, const Eigen::Vector3d& cam_pt);

}  // namespace planar
