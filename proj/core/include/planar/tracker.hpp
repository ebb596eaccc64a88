#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "planar/depth_frame.hpp"
#include "planar/errors.hpp"
#include "planar/mask.hpp"

namespace planar {

/// Tracker knobs. Defaults follow the tracking pipeline this implements:
/// keep depths in [150, 1000] mm inclusive, drop regions under 3500 px,
/// flag corners with internal angles in [30, 150] degrees, ignore vertices in
/// the bottom fifth of the candidate box, sample depth with a 5x5 patch.
struct TrackerConfig {
  int threshold_lo = 150;      // mm
  int threshold_hi = 1000;     // mm
  int min_region_px = 3500;
  double simplify_epsilon = 3.0;  // px
  double angle_lo_deg = 30.0;
  double angle_hi_deg = 150.0;
  double height_fraction = 0.2;
  int bottom_proximity_px = 10;
  int patch_size = 5;          // odd
  int refine_window = 7;       // px
  int refine_max_iters = 5;
  double refine_shift_tol = 0.05;  // px

  void validate() const;
};

/// JSON file with keys named exactly like the fields; absent keys keep their
/// defaults.
TrackerConfig load_tracker_config(const std::filesystem::path& path);

struct BBox {
  int xmin = 0;
  int ymin = 0;
  int xmax = -1;
  int ymax = -1;

  int width() const { return xmax - xmin + 1; }
  int height() const { return ymax - ymin + 1; }
  bool contains(const Eigen::Vector2i& p) const {
    return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
  }
  static BBox of(const std::vector<Eigen::Vector2i>& points);
};

/// Ordered boundary of one 8-connected foreground region. Vertices are the
/// border pixels in traversal order; area_px counts the whole region.
struct OutlinePolygon {
  std::vector<Eigen::Vector2i> vertices;
  int area_px = 0;
};

struct Candidate {
  OutlinePolygon polygon;  // simplified outline
  BBox bbox;
  bool touches_bottom = false;
};

/// Group of 4 detected corner vertices plus the context select_target ranks by.
struct CornerGroup {
  std::array<Eigen::Vector2i, 4> corners;  // outline order
  Eigen::Vector2d centroid;                // of the simplified outline
  BBox bbox;
  int area_px = 0;
};

struct RefinedCorner {
  Eigen::Vector2d position;
  bool refined = false;  // false: margin violation or flat/singular neighborhood
};

struct PatchSample {
  double mean_mm = 0.0;
  int pixels_visited = 0;
};

/// Final tracker output: 4 corners in original-frame coordinates with their
/// patch-sampled depths.
struct CornerQuad {
  std::array<Eigen::Vector2d, 4> corners;
  std::array<double, 4> depths;
  std::array<bool, 4> refined;
};

struct StepTimings {
  double trim_ms = 0.0;
  double threshold_ms = 0.0;
  double outline_ms = 0.0;
  double simplify_ms = 0.0;
  double candidates_ms = 0.0;
  double corners_ms = 0.0;
  double refine_ms = 0.0;
  double sample_ms = 0.0;
  double total_ms = 0.0;
};

struct TrackResult {
  ErrorCode status = ErrorCode::Ok;
  std::string failed_step;  // set when status != Ok
  CornerQuad quad{};        // valid only when status == Ok
  StepTimings timings{};
  long long patch_pixels_visited = 0;

  bool ok() const { return status == ErrorCode::Ok; }
};

/// --- Pipeline steps ---

struct TrimmedFrame {
  DepthFrame frame;
  int dx = 0;
  int dy = 0;
};

/// Minimal sub-rectangle containing every nonzero pixel. Throws
/// PipelineError(EmptyFrame) on all-zero input.
TrimmedFrame trim(const DepthFrame& frame);

/// Depth image with out-of-range values zeroed (the image the later steps
/// refine and sample from).
DepthFrame threshold_depth(const DepthFrame& frame, const TrackerConfig& cfg);

/// Bit set iff threshold_lo <= depth <= threshold_hi, both ends inclusive.
BinaryMask threshold_mask(const DepthFrame& frame, const TrackerConfig& cfg);

/// Border following over every 8-connected foreground region (outer borders
/// only), raster order of first encounter.
std::vector<OutlinePolygon> extract_outlines(const BinaryMask& mask);

/// Closed-polygon Douglas-Peucker: split at the two farthest-apart vertices,
/// simplify each half. Every dropped vertex stays within epsilon of the kept
/// polyline; kept vertices are a subsequence of the input.
OutlinePolygon simplify_outline(const OutlinePolygon& outline, double epsilon);

/// Region-size filter plus the bottom rule: the bounding box must reach the
/// mask bottom and one of its bottom corners must land near a mask bottom
/// corner, where the arm holding the target enters the view.
std::vector<Candidate> identify_candidates(const std::vector<OutlinePolygon>& simplified,
                                           const BinaryMask& mask, const TrackerConfig& cfg);

/// Height filter, internal-angle flagging, then the consecutive-run rule with
/// the 5-vertex-window fallback. Returns the 4 corner vertices in outline
/// order, or nullopt.
std::optional<std::array<Eigen::Vector2i, 4>> detect_corners(const Candidate& candidate,
                                                             const TrackerConfig& cfg);

/// Highest outline centroid relative to its bounding box wins; ties go to the
/// larger region. Throws PipelineError(NoTarget) on empty input.
const CornerGroup& select_target(const std::vector<CornerGroup>& groups);

/// Gradient-weighted least-squares corner relocation iterated to sub-pixel,
/// run on the thresholded depth image. Corners too close to the border or in
/// flat neighborhoods come back unrefined with refined=false.
std::array<RefinedCorner, 4> refine_corners(const DepthFrame& depth,
                                            const std::array<Eigen::Vector2i, 4>& corners,
                                            const TrackerConfig& cfg);

/// Mean of the nonzero depths in the patch_size x patch_size window centered
/// at the rounded corner, window clipped at frame edges. Throws
/// PipelineError(SamplingFailure) when the patch holds only zeros.
PatchSample sample_patch_depth(const DepthFrame& frame, const Eigen::Vector2d& corner,
                               int patch_size);

/// Full tracker: trim, threshold, outline, simplify, candidates, corner
/// detection/selection, refinement, patch sampling. Per-frame errors come back
/// as a status with step attribution instead of propagating.
TrackResult track(const DepthFrame& frame, const TrackerConfig& cfg);

}  // namespace planar
