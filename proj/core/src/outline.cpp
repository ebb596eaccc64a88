#include <vector>

#include "planar/tracker.hpp"

namespace planar {

namespace {

// 8 neighbors enumerated clockwise in image coordinates (y grows downward).
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_index(const Eigen::Vector2i& from, const Eigen::Vector2i& to) {
  const int dx = to.x() - from.x();
  const int dy = to.y() - from.y();
  for (int k = 0; k < 8; ++k) {
    if (kDx[k] == dx && kDy[k] == dy) return k;
  }
  return -1;
}

/// Outer-border following from the region's raster-first pixel, whose west
/// neighbor is guaranteed background. Produces the border pixels in traversal
/// order; border pixels of one-pixel-wide spurs appear once per pass but never
/// twice in a row.
std::vector<Eigen::Vector2i> follow_border(const std::vector<int>& labels, int w, int h,
                                           int label, const Eigen::Vector2i& start) {
  auto is_fg = [&](int x, int y) {
    return x >= 0 && x < w && y >= 0 && y < h &&
           labels[static_cast<std::size_t>(y) * w + x] == label;
  };

  std::vector<Eigen::Vector2i> border;

  // Clockwise scan from the west neighbor for the first region pixel.
  int first_dir = -1;
  for (int k = 0; k < 8; ++k) {
    const int dir = (4 + k) % 8;
    if (is_fg(start.x() + kDx[dir], start.y() + kDy[dir])) {
      first_dir = dir;
      break;
    }
  }
  if (first_dir < 0) {
    border.push_back(start);  // isolated pixel
    return border;
  }

  const Eigen::Vector2i first(start.x() + kDx[first_dir], start.y() + kDy[first_dir]);
  Eigen::Vector2i prev = first;   // (i2,j2)
  Eigen::Vector2i cur = start;    // (i3,j3)

  for (;;) {
    // Counterclockwise scan around cur, starting just past prev.
    const int back = direction_index(cur, prev);
    Eigen::Vector2i next = cur;
    for (int k = 1; k <= 8; ++k) {
      const int dir = (back - k + 16) % 8;
      if (is_fg(cur.x() + kDx[dir], cur.y() + kDy[dir])) {
        next = Eigen::Vector2i(cur.x() + kDx[dir], cur.y() + kDy[dir]);
        break;
      }
    }
    border.push_back(cur);
    if (next == start && cur == first) {
      break;  // back at the initial configuration
    }
    prev = cur;
    cur = next;
  }
  return border;
}

}  // namespace

BBox BBox::of(const std::vector<Eigen::Vector2i>& points) {
  BBox box;
  if (points.empty()) return box;
  box.xmin = box.xmax = points[0].x();
  box.ymin = box.ymax = points[0].y();
  for (const auto& p : points) {
    box.xmin = std::min(box.xmin, p.x());
    box.xmax = std::max(box.xmax, p.x());
    box.ymin = std::min(box.ymin, p.y());
    box.ymax = std::max(box.ymax, p.y());
  }
  return box;
}

std::vector<OutlinePolygon> extract_outlines(const BinaryMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
  std::vector<OutlinePolygon> outlines;

  int next_label = 0;
  std::vector<int> stack;  // linear pixel indices, reused across regions
  stack.reserve(1024);
  const std::uint8_t* bits = mask.bits.data();
  int* lab = labels.data();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int start = y * w + x;
      if (!bits[start] || lab[start] != 0) continue;

      // 8-connected flood fill for the label and the region's pixel count.
      // Interior pixels take the fast path: all 8 neighbors in bounds.
      const int label = ++next_label;
      int area = 0;
      lab[start] = label;
      stack.push_back(start);
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        ++area;
        const int px = idx % w;
        const int py = idx / w;
        if (px > 0 && px < w - 1 && py > 0 && py < h - 1) {
          const int offsets[8] = {idx + 1,     idx + 1 + w, idx + w,     idx - 1 + w,
                                  idx - 1,     idx - 1 - w, idx - w,     idx + 1 - w};
          for (int n : offsets) {
            if (bits[n] && lab[n] == 0) {
              lab[n] = label;
              stack.push_back(n);
            }
          }
        } else {
          for (int k = 0; k < 8; ++k) {
            const int nx = px + kDx[k];
            const int ny = py + kDy[k];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const int n = ny * w + nx;
            if (bits[n] && lab[n] == 0) {
              lab[n] = label;
              stack.push_back(n);
            }
          }
        }
      }

      OutlinePolygon outline;
      outline.vertices = follow_border(labels, w, h, label, {x, y});
      outline.area_px = area;
      outlines.push_back(std::move(outline));
    }
  }
  return outlines;
}

}  // namespace planar
