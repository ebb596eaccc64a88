#pragma once

#include <filesystem>
#include <vector>

#include "planar/metrics.hpp"
#include "planar/pipeline.hpp"
#include "planar/scene.hpp"

namespace planar {

struct SweepOptions {
  std::vector<int> sizes = {1, 3, 5, 7, 9, 11, 13};
  /// Latency per (frame, size) cell is the min over this many repeated runs;
  /// repetition suppresses scheduler jitter that would otherwise drown the
  /// small per-size cost differences.
  int timing_repeats = 3;
};

struct SweepCell {
  int patch_size = 0;
  int frame_id = 0;
  double latency_ms = 0.0;
  double mean_corner_err_mm = 0.0;  // vs truth world corners, aligned
  double dice = 0.0;                // corner-derived segmentation vs truth mask
  ErrorCode status = ErrorCode::Ok;
  long long work_px = 0;            // patch pixels visited on this frame
};

struct SweepSizeSummary {
  int patch_size = 0;
  MetricsRecord latency;   // over successful frames
  MetricsRecord accuracy;  // mean corner error per frame, mm
  long long work_px_total = 0;
  int failures = 0;
};

/// Full tracker run per (size, frame) over the set; rigs carry each frame's
/// camera pose. Per-frame tracking errors are recorded in the cell and
/// excluded from the aggregates. Cells come back sorted by size then frame.
std::vector<SweepCell> patch_sweep(const std::vector<DepthFrame>& frames,
                                   const std::vector<SceneTruth>& truths,
                                   const std::vector<CameraRig>& rigs,
                                   const TrackerConfig& base_config, const SweepOptions& options);

std::vector<SweepSizeSummary> summarize_sweep(const std::vector<SweepCell>& cells);

/// Columns: patch_size, frame_id, latency_ms, mean_corner_err_mm, dice, error_code.
void write_sweep_csv(const std::vector<SweepCell>& cells, const std::filesystem::path& path);

}  // namespace planar
