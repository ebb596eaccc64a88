#include "planar/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace planar {

KdTree3::KdTree3(const std::vector<Eigen::Vector3d>& points) : points_(&points) {
  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(points.size());
  root_ = build(idx, 0, static_cast<int>(points.size()), 0);
}

int KdTree3::build(std::vector<int>& idx, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 3;
  const int mid = (lo + hi) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi, [&](int a, int b) {
    const double va = (*points_)[static_cast<std::size_t>(a)](axis);
    const double vb = (*points_)[static_cast<std::size_t>(b)](axis);
    return va != vb ? va < vb : a < b;
  });

  const int node_id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{idx[static_cast<std::size_t>(mid)], -1, -1, axis});
  const int left = build(idx, lo, mid, depth + 1);
  const int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[static_cast<std::size_t>(node_id)].left = left;
  nodes_[static_cast<std::size_t>(node_id)].right = right;
  return node_id;
}

void KdTree3::search(int node, const Eigen::Vector3d& query, int& best, double& best_d2) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const Eigen::Vector3d& p = (*points_)[static_cast<std::size_t>(n.point)];
  const double d2 = (p - query).squaredNorm();
  if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
    best_d2 = d2;
    best = n.point;
  }

  const double delta = query(n.axis) - p(n.axis);
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search(near, query, best, best_d2);
  if (delta * delta <= best_d2) {
    search(far, query, best, best_d2);
  }
}

int KdTree3::nearest(const Eigen::Vector3d& query) const {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, query, best, best_d2);
  return best;
}

}  // namespace planar
