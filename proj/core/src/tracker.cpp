#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "planar/tracker.hpp"

namespace planar {

void TrackerConfig::validate() const {
  if (threshold_lo >= threshold_hi) {
    throw ConfigError("tracker: threshold_lo must be < threshold_hi");
  }
  if (threshold_lo < 0) {
    throw ConfigError("tracker: threshold_lo must be >= 0");
  }
  if (min_region_px < 0) {
    throw ConfigError("tracker: min_region_px must be >= 0");
  }
  if (simplify_epsilon < 0.0) {
    throw ConfigError("tracker: simplify_epsilon must be >= 0");
  }
  if (!(angle_lo_deg > 0.0) || !(angle_lo_deg < angle_hi_deg) || !(angle_hi_deg < 180.0)) {
    throw ConfigError("tracker: need 0 < angle_lo_deg < angle_hi_deg < 180");
  }
  if (!(height_fraction >= 0.0) || height_fraction >= 1.0) {
    throw ConfigError("tracker: height_fraction must be in [0, 1)");
  }
  if (bottom_proximity_px < 0) {
    throw ConfigError("tracker: bottom_proximity_px must be >= 0");
  }
  if (patch_size < 1 || patch_size % 2 == 0) {
    throw ConfigError("tracker: patch_size must be odd and >= 1");
  }
  if (refine_window < 3 || refine_window % 2 == 0) {
    throw ConfigError("tracker: refine_window must be odd and >= 3");
  }
  if (refine_max_iters < 1) {
    throw ConfigError("tracker: refine_max_iters must be >= 1");
  }
  if (!(refine_shift_tol > 0.0)) {
    throw ConfigError("tracker: refine_shift_tol must be > 0");
  }
}

TrackerConfig load_tracker_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("tracker config: cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("tracker config: parse error in " + path.string() + ": " + e.what());
  }

  TrackerConfig cfg;
  auto get_int = [&](const char* key, int& field) {
    if (j.contains(key)) field = j[key].get<int>();
  };
  auto get_double = [&](const char* key, double& field) {
    if (j.contains(key)) field = j[key].get<double>();
  };
  get_int("threshold_lo", cfg.threshold_lo);
  get_int("threshold_hi", cfg.threshold_hi);
  get_int("min_region_px", cfg.min_region_px);
  get_double("simplify_epsilon", cfg.simplify_epsilon);
  get_double("angle_lo_deg", cfg.angle_lo_deg);
  get_double("angle_hi_deg", cfg.angle_hi_deg);
  get_double("height_fraction", cfg.height_fraction);
  get_int("bottom_proximity_px", cfg.bottom_proximity_px);
  get_int("patch_size", cfg.patch_size);
  get_int("refine_window", cfg.refine_window);
  get_int("refine_max_iters", cfg.refine_max_iters);
  get_double("refine_shift_tol", cfg.refine_shift_tol);
  cfg.validate();
  return cfg;
}

TrimmedFrame trim(const DepthFrame& frame) {
  int xmin = frame.width(), ymin = frame.height(), xmax = -1, ymax = -1;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      if (frame.at(x, y) != 0) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax < 0) {
    throw PipelineError(ErrorCode::EmptyFrame, "trim", "trim: frame has no nonzero pixel");
  }

  const int w = xmax - xmin + 1;
  const int h = ymax - ymin + 1;
  std::vector<std::uint16_t> depths(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      depths[static_cast<std::size_t>(y) * w + x] = frame.at(xmin + x, ymin + y);
    }
  }
  return TrimmedFrame{DepthFrame(w, h, std::move(depths)), xmin, ymin};
}

DepthFrame threshold_depth(const DepthFrame& frame, const TrackerConfig& cfg) {
  std::vector<std::uint16_t> depths(frame.depths().begin(), frame.depths().end());
  for (auto& d : depths) {
    if (d < cfg.threshold_lo || d > cfg.threshold_hi) d = 0;
  }
  return DepthFrame(frame.width(), frame.height(), std::move(depths));
}

BinaryMask threshold_mask(const DepthFrame& frame, const TrackerConfig& cfg) {
  BinaryMask mask = BinaryMask::zeros(frame.width(), frame.height());
  for (std::size_t i = 0; i < frame.depths().size(); ++i) {
    const std::uint16_t d = frame.depths()[i];
    mask.bits[i] = (d >= cfg.threshold_lo && d <= cfg.threshold_hi) ? 1 : 0;
  }
  return mask;
}

namespace {

/// Zero border around a frame. Trim cuts exactly at the silhouette, which
/// would strand the target's corners inside the refinement margin; the
/// padding restores the zero surround the original frame had there.
DepthFrame pad_zeros(const DepthFrame& frame, int pad) {
  const int w = frame.width() + 2 * pad;
  const int h = frame.height() + 2 * pad;
  std::vector<std::uint16_t> depths(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      depths[static_cast<std::size_t>(y + pad) * w + (x + pad)] = frame.at(x, y);
    }
  }
  return DepthFrame(w, h, std::move(depths));
}

}  // namespace

TrackResult track(const DepthFrame& frame, const TrackerConfig& cfg) {
  cfg.validate();

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto mark = [last = start]() mutable {
    const auto now = clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last).count();
    last = now;
    return ms;
  };

  TrackResult result;
  try {
    const TrimmedFrame trimmed = trim(frame);
    result.timings.trim_ms = mark();

    const DepthFrame prepared = threshold_depth(trimmed.frame, cfg);
    BinaryMask mask = threshold_mask(trimmed.frame, cfg);
    mask.origin_dx = trimmed.dx;
    mask.origin_dy = trimmed.dy;
    result.timings.threshold_ms = mark();

    const std::vector<OutlinePolygon> outlines = extract_outlines(mask);
    result.timings.outline_ms = mark();

    std::vector<OutlinePolygon> simplified;
    simplified.reserve(outlines.size());
    for (const auto& o : outlines) {
      simplified.push_back(simplify_outline(o, cfg.simplify_epsilon));
    }
    result.timings.simplify_ms = mark();

    const std::vector<Candidate> candidates = identify_candidates(simplified, mask, cfg);
    result.timings.candidates_ms = mark();

    std::vector<CornerGroup> groups;
    for (const auto& cand : candidates) {
      if (auto corners = detect_corners(cand, cfg)) {
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        for (const auto& v : cand.polygon.vertices) centroid += v.cast<double>();
        centroid /= static_cast<double>(cand.polygon.vertices.size());
        groups.push_back(CornerGroup{*corners, centroid, cand.bbox, cand.polygon.area_px});
      }
    }
    const CornerGroup target = select_target(groups);
    result.timings.corners_ms = mark();

    const int pad = cfg.refine_window / 2 + 2;
    const DepthFrame padded = pad_zeros(prepared, pad);
    std::array<Eigen::Vector2i, 4> shifted = target.corners;
    for (auto& c : shifted) c += Eigen::Vector2i(pad, pad);
    const auto refined = refine_corners(padded, shifted, cfg);
    result.timings.refine_ms = mark();

    for (std::size_t i = 0; i < 4; ++i) {
      const PatchSample sample = sample_patch_depth(padded, refined[i].position, cfg.patch_size);
      result.patch_pixels_visited += sample.pixels_visited;
      result.quad.depths[i] = sample.mean_mm;
      result.quad.corners[i] =
          refined[i].position + Eigen::Vector2d(trimmed.dx - pad, trimmed.dy - pad);
      result.quad.refined[i] = refined[i].refined;
    }
    result.timings.sample_ms = mark();
  } catch (const PipelineError& e) {
    result.status = e.code();
    result.failed_step = e.step();
  }

  result.timings.total_ms =
      std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return result;
}

}  // namespace planar
