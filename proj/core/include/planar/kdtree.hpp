#pragma once

#include <Eigen/Dense>
#include <vector>

namespace planar {

/// 3D k-d tree for nearest-neighbor queries; the spatial index behind ICP
/// correspondence search. Indices refer to the point vector given at build
/// time, which must outlive the tree.
class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Eigen::Vector3d>& points);

  /// Index of the closest point to query (ties resolved toward the smaller
  /// index). Returns -1 for an empty tree.
  int nearest(const Eigen::Vector3d& query) const;

  std::size_t size() const { return points_->size(); }

 private:
  struct Node {
    int point = -1;
    int left = -1;
    int right = -1;
    int axis = 0;
  };

  int build(std::vector<int>& idx, int lo, int hi, int depth);
  void search(int node, const Eigen::Vector3d& query, int& best, double& best_d2) const;

  const std::vector<Eigen::Vector3d>* points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace planar
