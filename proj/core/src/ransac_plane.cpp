#include "planar/ransac_plane.hpp"

#include "planar/errors.hpp"
#include "planar/rng.hpp"

namespace planar {

namespace {

std::size_t count_inliers(const PointCloud& cloud, const PlaneModel& plane, double threshold,
                          std::vector<std::uint8_t>* flags) {
  std::size_t count = 0;
  if (flags) flags->assign(cloud.points.size(), 0);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (plane.distance(cloud.points[i]) <= threshold) {
      ++count;
      if (flags) (*flags)[i] = 1;
    }
  }
  return count;
}

/// Least-squares plane through the flagged points (centroid + smallest
/// principal direction).
PlaneModel refit_plane(const PointCloud& cloud, const std::vector<std::uint8_t>& flags) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::size_t n = 0;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (flags[i]) {
      centroid += cloud.points[i];
      ++n;
    }
  }
  centroid /= static_cast<double>(n);

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (!flags[i]) continue;
    const Eigen::Vector3d d = cloud.points[i] - centroid;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  PlaneModel plane;
  plane.normal = eig.eigenvectors().col(0).normalized();
  plane.offset = plane.normal.dot(centroid);
  return plane;
}

}  // namespace

RansacPlaneResult ransac_plane(const PointCloud& cloud, double inlier_threshold_mm,
                               int iterations, std::uint64_t seed) {
  if (cloud.points.size() < 3) {
    throw PipelineError(ErrorCode::RansacNoPlane, "ransac", "ransac_plane: cloud needs >= 3 points");
  }
  if (!(inlier_threshold_mm > 0.0) || iterations < 1) {
    throw ConfigError("ransac_plane: threshold must be > 0 and iterations >= 1");
  }

  const std::size_t n = cloud.points.size();
  PlaneModel best_plane;
  std::size_t best_count = 0;
  int best_round = -1;

  for (int round = 0; round < iterations; ++round) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(round), "ransac-round"));
    const std::size_t ia = rng.uniform_index(n);
    std::size_t ib = rng.uniform_index(n);
    std::size_t ic = rng.uniform_index(n);
    if (ia == ib || ia == ic || ib == ic) continue;

    const Eigen::Vector3d& a = cloud.points[ia];
    const Eigen::Vector3d normal = (cloud.points[ib] - a).cross(cloud.points[ic] - a);
    const double len = normal.norm();
    if (len < 1e-9) continue;  // collinear sample

    PlaneModel plane;
    plane.normal = normal / len;
    plane.offset = plane.normal.dot(a);

    const std::size_t count = count_inliers(cloud, plane, inlier_threshold_mm, nullptr);
    if (count > best_count) {  // ties keep the earlier round
      best_count = count;
      best_plane = plane;
      best_round = round;
    }
  }

  if (best_round < 0) {
    throw PipelineError(ErrorCode::RansacNoPlane, "ransac",
                        "ransac_plane: no valid 3-point sample in the iteration budget");
  }

  RansacPlaneResult result;
  result.plane = best_plane;
  result.inlier_count = count_inliers(cloud, best_plane, inlier_threshold_mm, &result.inliers);
  result.best_round = best_round;

  if (result.inlier_count >= 3) {
    const PlaneModel refit = refit_plane(cloud, result.inliers);
    std::vector<std::uint8_t> refit_flags;
    const std::size_t refit_count = count_inliers(cloud, refit, inlier_threshold_mm, &refit_flags);
    // Keep the refit only when it does not lose support, so the returned
    // model's inlier count dominates every sampled candidate.
    if (refit_count >= result.inlier_count) {
      result.plane = refit;
      result.inliers = std::move(refit_flags);
      result.inlier_count = refit_count;
    }
  }
  return result;
}

}  // namespace planar
