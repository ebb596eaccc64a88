#include "planar/depth_frame.hpp"

#include <stdexcept>
#include <string>

namespace planar {

DepthFrame::DepthFrame(int width, int height, std::vector<std::uint16_t> depths)
    : width_(width), height_(height), depths_(std::move(depths)) {
  if (width_ <= 0 || height_ <= 0) {
    throw std::invalid_argument("DepthFrame: dimensions must be positive, got " +
                                std::to_string(width_) + "x" + std::to_string(height_));
  }
  if (depths_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw std::invalid_argument("DepthFrame: depth count " + std::to_string(depths_.size()) +
                                " does not match " + std::to_string(width_) + "x" +
                                std::to_string(height_));
  }
}

DepthFrame DepthFrame::filled(int width, int height, std::uint16_t value) {
  return DepthFrame(width, height,
                    std::vector<std::uint16_t>(
                        static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value));
}

}  // namespace planar
