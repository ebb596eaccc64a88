#include <algorithm>
#include <cmath>

#include "planar/tracker.hpp"

namespace planar {

namespace {

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

/// Open-path Douglas-Peucker over outline indices [lo, hi]; keeps indices into
/// the original vertex array so the output is a true subsequence. Distances
/// are taken to the chord segment, which makes the dropped-vertex guarantee
/// hold against the final polyline.
void douglas_peucker(const std::vector<Eigen::Vector2i>& pts, const std::vector<int>& idx,
                     int lo, int hi, double epsilon, std::vector<int>& keep) {
  if (hi - lo < 2) return;
  const Eigen::Vector2d a = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(lo)])].cast<double>();
  const Eigen::Vector2d b = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(hi)])].cast<double>();
  double worst = -1.0;
  int split = -1;
  for (int i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(
        pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].cast<double>(), a, b);
    if (d > worst) {
      worst = d;
      split = i;
    }
  }
  if (worst > epsilon) {
    douglas_peucker(pts, idx, lo, split, epsilon, keep);
    keep.push_back(split);
    douglas_peucker(pts, idx, split, hi, epsilon, keep);
  }
}

long long cross(const Eigen::Vector2i& o, const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
  return static_cast<long long>(a.x() - o.x()) * (b.y() - o.y()) -
         static_cast<long long>(a.y() - o.y()) * (b.x() - o.x());
}

/// Farthest pair of outline vertices as indices into the outline, exact via
/// convex hull + rotating calipers (O(n^2) scans would eat the frame budget
/// on long borders).
std::pair<int, int> farthest_pair(const std::vector<Eigen::Vector2i>& pts) {
  // Hull over positions; remember one outline index per position.
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const auto& a = pts[static_cast<std::size_t>(i)];
    const auto& b = pts[static_cast<std::size_t>(j)];
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](int i, int j) {
                            return pts[static_cast<std::size_t>(i)] == pts[static_cast<std::size_t>(j)];
                          }),
              order.end());

  if (order.size() == 1) return {order[0], order[0]};

  std::vector<int> hull;
  auto build = [&](auto begin, auto end) {
    const std::size_t base = hull.size();
    for (auto it = begin; it != end; ++it) {
      while (hull.size() >= base + 2 &&
             cross(pts[static_cast<std::size_t>(hull[hull.size() - 2])],
                   pts[static_cast<std::size_t>(hull[hull.size() - 1])],
                   pts[static_cast<std::size_t>(*it)]) <= 0) {
        hull.pop_back();
      }
      hull.push_back(*it);
    }
  };
  build(order.begin(), order.end());
  hull.pop_back();
  build(order.rbegin(), order.rend());
  hull.pop_back();

  if (hull.size() == 1) return {hull[0], hull[0]};
  if (hull.size() == 2) return {hull[0], hull[1]};

  // The diameter pair lies on the hull; the hull of a pixel border is small
  // enough that the exact pairwise scan is cheap.
  long long best = -1;
  std::pair<int, int> result{hull[0], hull[0]};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      const long long d = (pts[static_cast<std::size_t>(hull[i])] - pts[static_cast<std::size_t>(hull[j])])
                              .cast<long long>()
                              .squaredNorm();
      if (d > best) {
        best = d;
        result = {hull[i], hull[j]};
      }
    }
  }
  if (result.first > result.second) std::swap(result.first, result.second);
  return result;
}

}  // namespace

OutlinePolygon simplify_outline(const OutlinePolygon& outline, double epsilon) {
  if (epsilon < 0.0) {
    throw ConfigError("simplify_outline: epsilon must be >= 0");
  }
  const auto& pts = outline.vertices;
  OutlinePolygon out;
  out.area_px = outline.area_px;
  if (pts.size() <= 3) {
    out.vertices = pts;
    return out;
  }

  const auto [ia, ib] = farthest_pair(pts);
  if (ia == ib) {  // all vertices coincide
    out.vertices = {pts[static_cast<std::size_t>(ia)]};
    return out;
  }

  const int n = static_cast<int>(pts.size());
  // Cyclic index chains ia..ib and ib..ia.
  std::vector<int> half1, half2;
  for (int i = ia;; i = (i + 1) % n) {
    half1.push_back(i);
    if (i == ib) break;
  }
  for (int i = ib;; i = (i + 1) % n) {
    half2.push_back(i);
    if (i == ia) break;
  }

  std::vector<int> kept;  // positions within each half
  kept.push_back(0);
  douglas_peucker(pts, half1, 0, static_cast<int>(half1.size()) - 1, epsilon, kept);
  std::vector<int> result;
  for (int k : kept) result.push_back(half1[static_cast<std::size_t>(k)]);

  kept.clear();
  kept.push_back(0);
  douglas_peucker(pts, half2, 0, static_cast<int>(half2.size()) - 1, epsilon, kept);
  for (int k : kept) result.push_back(half2[static_cast<std::size_t>(k)]);

  out.vertices.reserve(result.size());
  for (int i : result) {
    const Eigen::Vector2i& v = pts[static_cast<std::size_t>(i)];
    if (out.vertices.empty() || out.vertices.back() != v) {
      out.vertices.push_back(v);
    }
  }
  if (out.vertices.size() > 1 && out.vertices.front() == out.vertices.back()) {
    out.vertices.pop_back();
  }
  return out;
}

}  // namespace planar
