#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "planar/depth_frame.hpp"

namespace planar {

/// Per-pixel boolean grid. origin_dx/origin_dy locate a trimmed region inside
/// the frame it was cut from (0,0 for full-frame masks such as scene truth).
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;
  int origin_dx = 0;
  int origin_dy = 0;

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;

  static BinaryMask zeros(int width, int height);
};

/// Even-odd polygon fill over pixel centers (integer coordinates), vertices in
/// any cyclic order, fractional coordinates welcome. Out-of-frame geometry is
/// clipped by construction.
BinaryMask rasterize_polygon(const std::vector<Eigen::Vector2d>& vertices, int width, int height);

/// Masks travel as 16-bit PGM with 0 = outside and 65535 = inside.
DepthFrame mask_to_frame(const BinaryMask& mask);
BinaryMask frame_to_mask(const DepthFrame& frame);

}  // namespace planar
