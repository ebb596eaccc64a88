#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace planar {

/// Rectangular grid of millimeter depth samples. Value 0 means "no return".
/// Immutable after construction; safe to share across threads.
class DepthFrame {
 public:
  DepthFrame(int width, int height, std::vector<std::uint16_t> depths);

  /// Frame of constant depth, mostly for tests and fixtures.
  static DepthFrame filled(int width, int height, std::uint16_t value);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint16_t at(int x, int y) const {
    return depths_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const std::uint16_t> depths() const { return depths_; }

  bool operator==(const DepthFrame& other) const = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint16_t> depths_;
};

}  // namespace planar
