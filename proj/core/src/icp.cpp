#include "planar/icp.hpp"

#include <cmath>
#include <limits>

#include "planar/errors.hpp"
#include "planar/kdtree.hpp"

namespace planar {

Eigen::Matrix4d fit_rigid_transform(const std::vector<Eigen::Vector3d>& a,
                                    const std::vector<Eigen::Vector3d>& b) {
  if (a.size() != b.size() || a.size() < 3) {
    throw PipelineError(ErrorCode::IcpDegenerate, "icp",
                        "fit_rigid_transform: need >= 3 paired points");
  }
  Eigen::Vector3d ca = Eigen::Vector3d::Zero();
  Eigen::Vector3d cb = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
  }
  ca /= static_cast<double>(a.size());
  cb /= static_cast<double>(b.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ca) * (b[i] - cb).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv(1) <= 1e-9 * std::max(1.0, sv(0))) {
    throw PipelineError(ErrorCode::IcpDegenerate, "icp",
                        "fit_rigid_transform: correspondence covariance rank < 2");
  }

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;  // reflection guard
  }
  const Eigen::Matrix3d rot = svd.matrixV() * d * svd.matrixU().transpose();

  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t.topLeftCorner<3, 3>() = rot;
  t.topRightCorner<3, 1>() = cb - rot * ca;
  return t;
}

IcpResult icp_point_to_point(const PointCloud& model, const PointCloud& target,
                             const Eigen::Matrix4d& init, int max_iters, double tol_mm) {
  if (model.points.size() < 3 || target.points.size() < 3) {
    throw PipelineError(ErrorCode::IcpDegenerate, "icp", "icp: both clouds need >= 3 points");
  }

  const KdTree3 tree(target.points);

  IcpResult result;
  result.transform = init;

  std::vector<Eigen::Vector3d> moved(model.points.size());
  std::vector<Eigen::Vector3d> matched(model.points.size());

  double prev_rms = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::Matrix3d rot = result.transform.topLeftCorner<3, 3>();
    const Eigen::Vector3d t = result.transform.topRightCorner<3, 1>();

    double ss = 0.0;
    for (std::size_t i = 0; i < model.points.size(); ++i) {
      moved[i] = rot * model.points[i] + t;
      const int j = tree.nearest(moved[i]);
      matched[i] = target.points[static_cast<std::size_t>(j)];
      ss += (moved[i] - matched[i]).squaredNorm();
    }
    const double rms = std::sqrt(ss / static_cast<double>(model.points.size()));
    // Exact-correspondence ICP cannot increase the objective; a rise beyond
    // rounding means the solver is broken, not the input.
    if (rms > prev_rms + 1e-9 * std::max(1.0, prev_rms)) {
      throw std::logic_error("icp: RMS increased between iterations");
    }
    result.rms_history.push_back(rms);
    result.rms = rms;
    result.iterations = iter + 1;

    if (prev_rms - rms < tol_mm) break;
    prev_rms = rms;

    // Refit against the fixed correspondences and fold into the running pose.
    const Eigen::Matrix4d update = fit_rigid_transform(moved, matched);
    result.transform = update * result.transform;
  }
  return result;
}

}  // namespace planar
