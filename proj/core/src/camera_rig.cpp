#include "planar/camera_rig.hpp"

#include <cmath>
#include <string>

#include "planar/errors.hpp"

namespace planar {

Eigen::Matrix4d CameraRig::world_to_cam() const {
  const Eigen::Matrix3d r = rotation();
  const Eigen::Vector3d t = translation();
  Eigen::Matrix4d inv = Eigen::Matrix4d::Identity();
  inv.topLeftCorner<3, 3>() = r.transpose();
  inv.topRightCorner<3, 1>() = -r.transpose() * t;
  return inv;
}

double orthonormality_error(const Eigen::Matrix3d& r) {
  const Eigen::Matrix3d residual = r.transpose() * r - Eigen::Matrix3d::Identity();
  return residual.cwiseAbs().maxCoeff();
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& r) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d rot = svd.matrixU() * svd.matrixV().transpose();
  if (rot.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    rot = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return rot;
}

void CameraRig::validate(double rigid_tol) const {
  if (width <= 0 || height <= 0) {
    throw ConfigError("CameraRig: width/height must be positive");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ConfigError("CameraRig: focal lengths must be positive");
  }
  const Eigen::Matrix3d r = rotation();
  if (orthonormality_error(r) > rigid_tol || r.determinant() <= 0.0) {
    throw ConfigError("CameraRig: cam_to_world rotation block is not rigid");
  }
  const Eigen::RowVector4d bottom = cam_to_world.row(3);
  if (bottom != Eigen::RowVector4d(0, 0, 0, 1)) {
    throw ConfigError("CameraRig: cam_to_world bottom row must be [0 0 0 1]");
  }
}

ImagePlanePoint pixel_to_image_plane(const CameraRig& rig, double u, double v) {
  const Eigen::Vector2d distorted((u - rig.cx) / rig.fx, (v - rig.cy) / rig.fy);
  if (rig.k1 == 0.0 && rig.k2 == 0.0) {
    return {distorted.x(), distorted.y()};
  }

  // Fixed-point inversion of p_d = p * (1 + k1 r^2 + k2 r^4).
  Eigen::Vector2d p = distorted;
  constexpr int kMaxIters = 64;
  const double tol = 1e-9 * std::max(1.0, distorted.norm());
  for (int i = 0; i < kMaxIters; ++i) {
    const double r2 = p.squaredNorm();
    const double scale = 1.0 + rig.k1 * r2 + rig.k2 * r2 * r2;
    if (!(scale > 1e-8)) break;  // model folded over, bail to the error path
    p = distorted / scale;
    if ((distort(rig, p) - distorted).norm() <= tol) {
      return {p.x(), p.y()};
    }
  }
  throw ConfigError("pixel_to_image_plane: distortion inversion did not converge at (" +
                    std::to_string(u) + ", " + std::to_string(v) + "); k1/k2 out of the invertible range");
}

std::optional<Eigen::Vector2d> project_to_pixel(const CameraRig& rig, const Eigen::Vector3d& cam_pt) {
  if (!(cam_pt.z() > 0.0)) return std::nullopt;
  const Eigen::Vector2d undistorted(-cam_pt.x() / cam_pt.z(), -cam_pt.y() / cam_pt.z());
  const Eigen::Vector2d d = distort(rig, undistorted);
  return Eigen::Vector2d(rig.cx + rig.fx * d.x(), rig.cy + rig.fy * d.y());
}

}  // namespace planar
