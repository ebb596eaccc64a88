#include "planar/point_cloud.hpp"

#include "planar/geometry.hpp"

namespace planar {

PointCloud depth_to_point_cloud(const DepthFrame& frame, const CameraRig& rig) {
  PointCloud cloud;
  cloud.points.reserve(frame.depths().size() / 4);
  cloud.source_pixels.reserve(frame.depths().size() / 4);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const std::uint16_t d = frame.at(x, y);
      if (d == 0) continue;
      const ImagePlanePoint ip = pixel_to_image_plane(rig, x, y);
      cloud.points.push_back(unproject(ip, static_cast<double>(d)));
      cloud.source_pixels.push_back(y * frame.width() + x);
    }
  }
  return cloud;
}

}  // namespace planar
