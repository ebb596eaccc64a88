#include "planar/sweep.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "planar/csv.hpp"

namespace planar {

std::vector<SweepCell> patch_sweep(const std::vector<DepthFrame>& frames,
                                   const std::vector<SceneTruth>& truths,
                                   const std::vector<CameraRig>& rigs,
                                   const TrackerConfig& base_config, const SweepOptions& options) {
  if (frames.size() != truths.size() || frames.size() != rigs.size()) {
    throw ConfigError("patch_sweep: frames, truths, and rigs must pair up");
  }
  if (options.sizes.empty()) {
    throw ConfigError("patch_sweep: need at least one patch size");
  }
  std::vector<int> sizes = options.sizes;
  std::sort(sizes.begin(), sizes.end());
  for (int s : sizes) {
    if (s < 1 || s % 2 == 0) {
      throw ConfigError("patch_sweep: sizes must be odd and >= 1");
    }
  }
  const int repeats = std::max(1, options.timing_repeats);

  std::vector<SweepCell> cells(sizes.size() * frames.size());

  // Per frame: warm every size once, then interleave timed repetitions across
  // sizes so drift (frequency, cache) hits all sizes alike. The reported
  // latency per cell is the min over repeats; tracker output is deterministic
  // across repeats, so accuracy comes from the first run.
  for (std::size_t f = 0; f < frames.size(); ++f) {
    TrackerConfig cfg = base_config;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      cfg.patch_size = sizes[s];
      TargetResult run = track_target(frames[f], rigs[f], cfg);  // warm-up + results

      SweepCell& cell = cells[s * frames.size() + f];
      cell.patch_size = sizes[s];
      cell.frame_id = static_cast<int>(f);
      cell.latency_ms = run.latency_ms;
      cell.status = run.status;
      cell.work_px = run.patch_pixels_visited;
      if (run.ok()) {
        cell.mean_corner_err_mm = corner_error(run.target.world_corners, truths[f].world_corners).mean;
        const std::vector<Eigen::Vector2d> quad(run.target.pixel_corners.begin(),
                                                run.target.pixel_corners.end());
        const BinaryMask seg = rasterize_polygon(quad, truths[f].po_mask.width, truths[f].po_mask.height);
        cell.dice = dice(seg, truths[f].po_mask);
      }
    }
    for (int r = 0; r < repeats; ++r) {
      for (std::size_t s = 0; s < sizes.size(); ++s) {
        cfg.patch_size = sizes[s];
        const TargetResult run = track_target(frames[f], rigs[f], cfg);
        SweepCell& cell = cells[s * frames.size() + f];
        cell.latency_ms = std::min(cell.latency_ms, run.latency_ms);
      }
    }
  }
  return cells;
}

std::vector<SweepSizeSummary> summarize_sweep(const std::vector<SweepCell>& cells) {
  std::map<int, std::vector<const SweepCell*>> by_size;
  for (const auto& c : cells) by_size[c.patch_size].push_back(&c);

  std::vector<SweepSizeSummary> out;
  for (const auto& [size, group] : by_size) {
    SweepSizeSummary s;
    s.patch_size = size;
    std::vector<double> lat, acc;
    for (const SweepCell* c : group) {
      if (c->status != ErrorCode::Ok) {
        ++s.failures;
        continue;
      }
      lat.push_back(c->latency_ms);
      acc.push_back(c->mean_corner_err_mm);
      s.work_px_total += c->work_px;
    }
    if (lat.empty()) {
      throw ConfigError("summarize_sweep: every frame failed at patch size " + std::to_string(size));
    }
    s.latency = MetricsRecord::of(std::move(lat));
    s.accuracy = MetricsRecord::of(std::move(acc));
    out.push_back(std::move(s));
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepCell>& cells, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ConfigError("write_sweep_csv: cannot open " + path.string());
  }
  out << "patch_size,frame_id,latency_ms,mean_corner_err_mm,dice,error_code\n";
  for (const auto& c : cells) {
    out << join_csv_row({std::to_string(c.patch_size), std::to_string(c.frame_id),
                         format_double(c.latency_ms), format_double(c.mean_corner_err_mm),
                         format_double(c.dice), to_string(c.status)});
  }
}

}  // namespace planar
