#include "planar/baseline_eval.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "planar/csv.hpp"
#include "planar/point_cloud.hpp"
#include "planar/rng.hpp"

namespace planar {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point start) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

/// Plane local->world frame reconstructed from the truth corners (outline
/// order starting at the local bottom-left).
struct TruthPlane {
  Eigen::Matrix4d local_to_world = Eigen::Matrix4d::Identity();
  double width = 0.0;
  double height = 0.0;
  std::array<Eigen::Vector3d, 4> local_corners{};
};

TruthPlane reconstruct_plane(const std::array<Eigen::Vector3d, 4>& corners) {
  TruthPlane plane;
  const Eigen::Vector3d center = (corners[0] + corners[1] + corners[2] + corners[3]) / 4.0;
  plane.width = ((corners[1] - corners[0]).norm() + (corners[2] - corners[3]).norm()) / 2.0;
  plane.height = ((corners[3] - corners[0]).norm() + (corners[2] - corners[1]).norm()) / 2.0;

  const Eigen::Vector3d u = (corners[1] - corners[0]).normalized();
  Eigen::Vector3d v = corners[3] - corners[0];
  v = (v - v.dot(u) * u).normalized();
  const Eigen::Vector3d n = u.cross(v);

  plane.local_to_world.block<3, 1>(0, 0) = u;
  plane.local_to_world.block<3, 1>(0, 1) = v;
  plane.local_to_world.block<3, 1>(0, 2) = n;
  plane.local_to_world.block<3, 1>(0, 3) = center;

  const double hw = plane.width / 2.0;
  const double hh = plane.height / 2.0;
  plane.local_corners = {Eigen::Vector3d(-hw, -hh, 0), Eigen::Vector3d(hw, -hh, 0),
                         Eigen::Vector3d(hw, hh, 0), Eigen::Vector3d(-hw, hh, 0)};
  return plane;
}

Eigen::Matrix4d perturb_pose(const Eigen::Matrix4d& pose, double angle_deg, double offset_mm,
                             Rng& rng) {
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
  const Eigen::Vector3d dir =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
  Eigen::Matrix4d delta = Eigen::Matrix4d::Identity();
  delta.topLeftCorner<3, 3>() =
      Eigen::AngleAxisd(angle_deg * 3.14159265358979324 / 180.0, axis).toRotationMatrix();
  delta.topRightCorner<3, 1>() = dir * offset_mm;
  return delta * pose;
}

BinaryMask inlier_mask(const PointCloud& cloud, const std::vector<std::uint8_t>& inliers,
                       int width, int height) {
  BinaryMask mask = BinaryMask::zeros(width, height);
  for (std::size_t i = 0; i < inliers.size(); ++i) {
    if (inliers[i]) mask.bits[static_cast<std::size_t>(cloud.source_pixels[i])] = 1;
  }
  return mask;
}

}  // namespace

PointCloud sample_plane_model_cloud(double width_mm, double height_mm, int approx_points) {
  if (!(width_mm > 0.0) || !(height_mm > 0.0) || approx_points < 4) {
    throw ConfigError("sample_plane_model_cloud: bad arguments");
  }
  const double aspect = width_mm / height_mm;
  int ny = std::max(2, static_cast<int>(std::lround(std::sqrt(approx_points / aspect))));
  int nx = std::max(2, static_cast<int>(std::lround(aspect * ny)));

  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double x = -width_mm / 2.0 + width_mm * ix / (nx - 1);
      const double y = -height_mm / 2.0 + height_mm * iy / (ny - 1);
      cloud.points.emplace_back(x, y, 0.0);
    }
  }
  return cloud;
}

std::vector<BaselineRow> evaluate_baselines(const std::vector<DepthFrame>& frames,
                                            const std::vector<SceneTruth>& truths,
                                            const std::vector<CameraRig>& rigs,
                                            const BaselineOptions& options) {
  if (frames.size() != truths.size() || frames.size() != rigs.size()) {
    throw ConfigError("evaluate_baselines: frames, truths, and rigs must pair up");
  }

  std::vector<BaselineRow> rows;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const SceneTruth& truth = truths[f];
    const CameraRig& rig = rigs[f];

    if (options.method == BaselineMethod::Icp) {
      BaselineRow row{"icp", static_cast<int>(f), 0.0, "mm", 0.0, ErrorCode::Ok};
      try {
        const PointCloud cloud = depth_to_point_cloud(frames[f], rig);
        const TruthPlane plane = reconstruct_plane(truth.world_corners);
        const PointCloud model =
            sample_plane_model_cloud(plane.width, plane.height, options.icp_model_points);

        Eigen::Matrix4d init = rig.world_to_cam() * plane.local_to_world;
        if (options.icp_perturb_init) {
          Rng rng(derive_seed(options.seed, f, "icp-perturb"));
          init = perturb_pose(init, options.perturb_deg, options.perturb_mm, rng);
        }

        const auto start = clock_type::now();
        const IcpResult icp =
            icp_point_to_point(model, cloud, init, options.icp_max_iters, options.icp_tol_mm);
        row.elapsed_ms = ms_since(start);

        const Eigen::Matrix4d world_to_cam = rig.world_to_cam();
        double err = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
          const Eigen::Vector3d fitted =
              (icp.transform * plane.local_corners[c].homogeneous()).head<3>();
          const Eigen::Vector3d truth_cam =
              (world_to_cam * truth.world_corners[c].homogeneous()).head<3>();
          err += (fitted - truth_cam).norm();
        }
        row.accuracy_value = err / 4.0;
      } catch (const PipelineError& e) {
        row.status = e.code();
      }
      rows.push_back(std::move(row));
    } else {
      BaselineRow row{"ransac", static_cast<int>(f), 0.0, "dice", 0.0, ErrorCode::Ok};
      try {
        const PointCloud cloud = depth_to_point_cloud(frames[f], rig);
        const auto start = clock_type::now();
        const RansacPlaneResult res =
            ransac_plane(cloud, options.ransac_threshold_mm, options.ransac_iterations,
                         derive_seed(options.seed, f, "ransac"));
        row.elapsed_ms = ms_since(start);
        const BinaryMask seg = inlier_mask(cloud, res.inliers, rig.width, rig.height);
        row.accuracy_value = dice(seg, truth.po_mask);
      } catch (const PipelineError& e) {
        row.status = e.code();
      }
      rows.push_back(std::move(row));

      if (options.include_tracker_dice) {
        BaselineRow trow{"tracker", static_cast<int>(f), 0.0, "dice", 0.0, ErrorCode::Ok};
        const TargetResult tracked = track_target(frames[f], rig, options.tracker);
        trow.elapsed_ms = tracked.latency_ms;
        if (tracked.ok()) {
          const std::vector<Eigen::Vector2d> quad(tracked.target.pixel_corners.begin(),
                                                  tracked.target.pixel_corners.end());
          const BinaryMask seg = rasterize_polygon(quad, rig.width, rig.height);
          trow.accuracy_value = dice(seg, truth.po_mask);
        } else {
          trow.status = tracked.status;
        }
        rows.push_back(std::move(trow));
      }
    }
  }
  return rows;
}

void write_baseline_csv(const std::vector<BaselineRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ConfigError("write_baseline_csv: cannot open " + path.string());
  }
  out << "method,frame,accuracy_value,accuracy_kind,elapsed_ms,error_code\n";
  for (const auto& r : rows) {
    out << join_csv_row({r.method, std::to_string(r.frame_id), format_double(r.accuracy_value),
                         r.accuracy_kind, format_double(r.elapsed_ms), to_string(r.status)});
  }
}

}  // namespace planar
