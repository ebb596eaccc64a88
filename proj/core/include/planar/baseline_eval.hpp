#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "planar/icp.hpp"
#include "planar/metrics.hpp"
#include "planar/pipeline.hpp"
#include "planar/ransac_plane.hpp"
#include "planar/scene.hpp"

namespace planar {

enum class BaselineMethod { Icp, Ransac };

struct BaselineOptions {
  BaselineMethod method = BaselineMethod::Ransac;

  // RANSAC
  double ransac_threshold_mm = 5.0;
  int ransac_iterations = 200;

  // ICP: the model cloud is sampled from the truth plane dimensions; init is
  // the truth pose, optionally perturbed (initialization quality is measured,
  // not solved).
  int icp_max_iters = 50;
  double icp_tol_mm = 1e-3;
  int icp_model_points = 10000;
  bool icp_perturb_init = false;
  double perturb_deg = 5.0;
  double perturb_mm = 20.0;

  /// Report corner-derived tracker segmentation Dice next to the RANSAC rows,
  /// same frames, same truth masks.
  bool include_tracker_dice = true;
  TrackerConfig tracker{};

  std::uint64_t seed = 0;
};

struct BaselineRow {
  std::string method;          // "icp" | "ransac" | "tracker"
  int frame_id = 0;
  double accuracy_value = 0.0;
  std::string accuracy_kind;   // "mm" | "dice"
  double elapsed_ms = 0.0;
  ErrorCode status = ErrorCode::Ok;
};

/// Uniform grid over the plane rectangle in local coordinates (z = 0, centered),
/// roughly approx_points samples with the exact corners included.
PointCloud sample_plane_model_cloud(double width_mm, double height_mm, int approx_points);

/// Per-frame baseline scores: ICP is scored by mean corner distance after
/// registration, RANSAC by Dice between its inlier pixels and the truth mask.
/// rigs carry each frame's camera pose. Per-frame failures are recorded in
/// the row, never thrown.
std::vector<BaselineRow> evaluate_baselines(const std::vector<DepthFrame>& frames,
                                            const std::vector<SceneTruth>& truths,
                                            const std::vector<CameraRig>& rigs,
                                            const BaselineOptions& options);

/// Columns: method, frame, accuracy_value, accuracy_kind, elapsed_ms, error_code.
void write_baseline_csv(const std::vector<BaselineRow>& rows, const std::filesystem::path& path);

}  // namespace planar
