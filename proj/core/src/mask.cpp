#include "planar/mask.hpp"

#include <algorithm>
#include <numeric>

namespace planar {

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

BinaryMask BinaryMask::zeros(int width, int height) {
  BinaryMask m;
  m.width = width;
  m.height = height;
  m.bits.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  return m;
}

BinaryMask rasterize_polygon(const std::vector<Eigen::Vector2d>& vertices, int width, int height) {
  BinaryMask mask = BinaryMask::zeros(width, height);
  const std::size_t n = vertices.size();
  if (n < 3) return mask;

  double ymin = vertices[0].y(), ymax = vertices[0].y();
  for (const auto& v : vertices) {
    ymin = std::min(ymin, v.y());
    ymax = std::max(ymax, v.y());
  }
  const int y0 = std::max(0, static_cast<int>(std::ceil(ymin)));
  const int y1 = std::min(height - 1, static_cast<int>(std::floor(ymax)));

  std::vector<double> crossings;
  for (int y = y0; y <= y1; ++y) {
    crossings.clear();
    const double fy = static_cast<double>(y);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& a = vertices[i];
      const Eigen::Vector2d& b = vertices[(i + 1) % n];
      if ((a.y() > fy) != (b.y() > fy)) {
        crossings.push_back(a.x() + (fy - a.y()) / (b.y() - a.y()) * (b.x() - a.x()));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
      const int x0 = std::max(0, static_cast<int>(std::ceil(crossings[i])));
      const int x1 = std::min(width - 1, static_cast<int>(std::floor(crossings[i + 1])));
      for (int x = x0; x <= x1; ++x) mask.set(x, y, true);
    }
  }
  return mask;
}

DepthFrame mask_to_frame(const BinaryMask& mask) {
  std::vector<std::uint16_t> depths(mask.bits.size());
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    depths[i] = mask.bits[i] ? 65535 : 0;
  }
  return DepthFrame(mask.width, mask.height, std::move(depths));
}

BinaryMask frame_to_mask(const DepthFrame& frame) {
  BinaryMask mask = BinaryMask::zeros(frame.width(), frame.height());
  for (std::size_t i = 0; i < frame.depths().size(); ++i) {
    mask.bits[i] = frame.depths()[i] != 0 ? 1 : 0;
  }
  return mask;
}

}  // namespace planar
