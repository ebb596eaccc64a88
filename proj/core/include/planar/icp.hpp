#pragma once

#include <Eigen/Dense>

#include "planar/point_cloud.hpp"

namespace planar {

struct IcpResult {
  Eigen::Matrix4d transform = Eigen::Matrix4d::Identity();  // model -> target
  double rms = 0.0;                                         // final correspondence RMS, mm
  int iterations = 0;
  std::vector<double> rms_history;  // one entry per iteration, non-increasing
};

/// Classic point-to-point ICP: nearest-neighbor correspondences through a k-d
/// tree, closed-form SVD rigid fit, repeat until the RMS change drops below
/// tol or max_iters. Throws PipelineError(IcpDegenerate) when the
/// correspondence covariance loses rank (all points collinear).
IcpResult icp_point_to_point(const PointCloud& model, const PointCloud& target,
                             const Eigen::Matrix4d& init, int max_iters = 50,
                             double tol_mm = 1e-4);

/// Least-squares rigid transform mapping points a onto points b (orthogonal
/// Procrustes). Sizes must match and be >= 3.
Eigen::Matrix4d fit_rigid_transform(const std::vector<Eigen::Vector3d>& a,
                                    const std::vector<Eigen::Vector3d>& b);

}  // namespace planar
