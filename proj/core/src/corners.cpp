#include <algorithm>
#include <cmath>

#include "planar/tracker.hpp"

namespace planar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Signed polygon area (shoelace); the sign encodes traversal orientation in
/// image coordinates and decides which side of a vertex is the interior.
long long signed_area2(const std::vector<Eigen::Vector2i>& v) {
  long long acc = 0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    acc += static_cast<long long>(a.x()) * b.y() - static_cast<long long>(b.x()) * a.y();
  }
  return acc;
}

/// Internal angle at vertex i in degrees, neighbors taken in polygon order.
double internal_angle_deg(const std::vector<Eigen::Vector2i>& v, std::size_t i, bool positive_area) {
  const std::size_t n = v.size();
  const Eigen::Vector2d prev = v[(i + n - 1) % n].cast<double>();
  const Eigen::Vector2d cur = v[i].cast<double>();
  const Eigen::Vector2d next = v[(i + 1) % n].cast<double>();

  const Eigen::Vector2d da = prev - cur;
  const Eigen::Vector2d db = next - cur;
  const double na = da.norm();
  const double nb = db.norm();
  if (na < 1e-12 || nb < 1e-12) return 180.0;

  const double cosv = std::clamp(da.dot(db) / (na * nb), -1.0, 1.0);
  double angle = std::acos(cosv) * 180.0 / kPi;

  // Convex when the turn agrees with the polygon orientation; otherwise the
  // vertex is reflex and the interior angle is the complement to 360.
  const double turn = (cur - prev).x() * (next - cur).y() - (cur - prev).y() * (next - cur).x();
  const bool convex = positive_area ? (turn > 0.0) : (turn < 0.0);
  if (!convex && turn != 0.0) angle = 360.0 - angle;
  return angle;
}

}  // namespace

std::vector<Candidate> identify_candidates(const std::vector<OutlinePolygon>& simplified,
                                           const BinaryMask& mask, const TrackerConfig& cfg) {
  std::vector<Candidate> out;
  const int prox = cfg.bottom_proximity_px;
  const Eigen::Vector2i mask_bl(0, mask.height - 1);
  const Eigen::Vector2i mask_br(mask.width - 1, mask.height - 1);

  for (const auto& poly : simplified) {
    if (poly.area_px < cfg.min_region_px) continue;
    if (poly.vertices.empty()) continue;

    const BBox box = BBox::of(poly.vertices);
    const bool bottom_edge_near = (mask.height - 1) - box.ymax <= prox;
    if (!bottom_edge_near) continue;

    const Eigen::Vector2i box_bl(box.xmin, box.ymax);
    const Eigen::Vector2i box_br(box.xmax, box.ymax);
    bool corner_near = false;
    for (const auto& bc : {box_bl, box_br}) {
      for (const auto& mc : {mask_bl, mask_br}) {
        if (std::abs(bc.x() - mc.x()) <= prox && std::abs(bc.y() - mc.y()) <= prox) {
          corner_near = true;
        }
      }
    }
    if (!corner_near) continue;

    out.push_back(Candidate{poly, box, bottom_edge_near});
  }
  return out;
}

std::optional<std::array<Eigen::Vector2i, 4>> detect_corners(const Candidate& candidate,
                                                             const TrackerConfig& cfg) {
  const auto& verts = candidate.polygon.vertices;
  if (verts.size() < 4) return std::nullopt;

  const bool positive_area = signed_area2(verts) > 0;
  const double cutoff_y =
      candidate.bbox.ymax - cfg.height_fraction * candidate.bbox.height();

  // Vertices above the bottom band, in outline order, with their corner flag.
  std::vector<std::size_t> working;
  std::vector<bool> flagged;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (static_cast<double>(verts[i].y()) > cutoff_y) continue;
    const double angle = internal_angle_deg(verts, i, positive_area);
    working.push_back(i);
    flagged.push_back(angle >= cfg.angle_lo_deg && angle <= cfg.angle_hi_deg);
  }

  const std::size_t m = working.size();
  if (m < 4) return std::nullopt;

  auto group_at = [&](const std::array<std::size_t, 4>& w_idx) {
    std::array<Eigen::Vector2i, 4> g;
    for (std::size_t k = 0; k < 4; ++k) g[k] = verts[working[w_idx[k]]];
    return g;
  };

  // Four cyclically consecutive flagged vertices.
  for (std::size_t i = 0; i < m; ++i) {
    bool run = true;
    for (std::size_t k = 0; k < 4; ++k) {
      if (!flagged[(i + k) % m]) {
        run = false;
        break;
      }
    }
    if (run) {
      return group_at({i % m, (i + 1) % m, (i + 2) % m, (i + 3) % m});
    }
  }

  // Fallback: each flagged vertex plus its next 4 successors, first window in
  // outline order holding 4 flags wins.
  const std::size_t window = std::min<std::size_t>(5, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!flagged[i]) continue;
    std::array<std::size_t, 4> hit{};
    std::size_t count = 0;
    for (std::size_t k = 0; k < window && count < 4; ++k) {
      const std::size_t j = (i + k) % m;
      if (flagged[j]) hit[count++] = j;
    }
    if (count == 4) {
      return group_at(hit);
    }
  }
  return std::nullopt;
}

const CornerGroup& select_target(const std::vector<CornerGroup>& groups) {
  if (groups.empty()) {
    throw PipelineError(ErrorCode::NoTarget, "corners", "select_target: no corner group");
  }
  const CornerGroup* best = &groups[0];
  auto ratio = [](const CornerGroup& g) {
    return (g.centroid.y() - g.bbox.ymin) / std::max(1, g.bbox.height());
  };
  double best_ratio = ratio(*best);
  for (const auto& g : groups) {
    const double r = ratio(g);
    if (r < best_ratio || (r == best_ratio && g.area_px > best->area_px)) {
      best = &g;
      best_ratio = r;
    }
  }
  return *best;
}

std::array<RefinedCorner, 4> refine_corners(const DepthFrame& depth,
                                            const std::array<Eigen::Vector2i, 4>& corners,
                                            const TrackerConfig& cfg) {
  const int half = cfg.refine_window / 2;
  const int margin = half + 1;  // central differences need one extra pixel
  const double trust_radius = cfg.refine_window / 2.0;

  auto value = [&](int x, int y) { return static_cast<double>(depth.at(x, y)); };

  std::array<RefinedCorner, 4> out;
  for (std::size_t c = 0; c < 4; ++c) {
    const Eigen::Vector2d origin = corners[c].cast<double>();
    out[c] = RefinedCorner{origin, false};

    Eigen::Vector2d cur = origin;
    for (int iter = 0; iter < cfg.refine_max_iters; ++iter) {
      const int cx = static_cast<int>(std::llround(cur.x()));
      const int cy = static_cast<int>(std::llround(cur.y()));
      if (cx < margin || cx >= depth.width() - margin || cy < margin ||
          cy >= depth.height() - margin) {
        break;  // margin violated, give the corner back unrefined
      }

      // Normal equations of the gradient-weighted edge-line intersection:
      // sum over the window of (g g^T) x = sum of (g g^T) p.
      double n00 = 0.0, n01 = 0.0, n11 = 0.0;
      Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
      for (int y = cy - half; y <= cy + half; ++y) {
        for (int x = cx - half; x <= cx + half; ++x) {
          const double gx = (value(x + 1, y) - value(x - 1, y)) * 0.5;
          const double gy = (value(x, y + 1) - value(x, y - 1)) * 0.5;
          const Eigen::Vector2d p(x, y);
          n00 += gx * gx;
          n01 += gx * gy;
          n11 += gy * gy;
          rhs += Eigen::Vector2d(gx * gx * p.x() + gx * gy * p.y(),
                                 gx * gy * p.x() + gy * gy * p.y());
        }
      }

      const double trace = n00 + n11;
      const double det = n00 * n11 - n01 * n01;
      if (!(det > 1e-9 * trace * trace) || trace <= 0.0) {
        break;  // flat or single-edge neighborhood, normal matrix is singular
      }

      const Eigen::Vector2d solution(
          (n11 * rhs.x() - n01 * rhs.y()) / det,
          (n00 * rhs.y() - n01 * rhs.x()) / det);
      if ((solution - origin).norm() > trust_radius) {
        break;  // refinement ran away from the detected corner
      }

      const double shift = (solution - cur).norm();
      cur = solution;
      out[c] = RefinedCorner{cur, true};
      if (shift < cfg.refine_shift_tol) break;
    }
  }
  return out;
}

PatchSample sample_patch_depth(const DepthFrame& frame, const Eigen::Vector2d& corner,
                               int patch_size) {
  if (patch_size < 1 || patch_size % 2 == 0) {
    throw ConfigError("sample_patch_depth: patch_size must be odd and >= 1");
  }
  const int cx = static_cast<int>(std::llround(corner.x()));
  const int cy = static_cast<int>(std::llround(corner.y()));
  const int half = patch_size / 2;

  const int x0 = std::max(0, cx - half);
  const int x1 = std::min(frame.width() - 1, cx + half);
  const int y0 = std::max(0, cy - half);
  const int y1 = std::min(frame.height() - 1, cy + half);

  PatchSample sample;
  double sum = 0.0;
  int nonzero = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      ++sample.pixels_visited;
      const std::uint16_t d = frame.at(x, y);
      if (d != 0) {
        sum += d;
        ++nonzero;
      }
    }
  }
  if (nonzero == 0) {
    throw PipelineError(ErrorCode::SamplingFailure, "sample",
                        "sample_patch_depth: all-zero patch at (" + std::to_string(cx) + ", " +
                            std::to_string(cy) + ")");
  }
  sample.mean_mm = sum / nonzero;
  return sample;
}

}  // namespace planar
