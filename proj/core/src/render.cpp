#include "planar/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "planar/errors.hpp"
#include "planar/rng.hpp"

namespace planar {

namespace {

constexpr double kFarBackgroundMm = 1100.0;

struct Rectangle {
  Eigen::Vector3d center;
  Eigen::Vector3d axis_u;  // unit, along plane_width
  Eigen::Vector3d axis_v;  // unit, along plane_height
  Eigen::Vector3d normal;
  double half_w = 0.0;
  double half_h = 0.0;
};

struct Capsule {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  double radius = 0.0;
};

std::optional<double> hit_rectangle(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                    const Rectangle& rect) {
  const double denom = dir.dot(rect.normal);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = (rect.center - origin).dot(rect.normal) / denom;
  if (t <= 0.0) return std::nullopt;
  const Eigen::Vector3d p = origin + t * dir - rect.center;
  if (std::abs(p.dot(rect.axis_u)) > rect.half_w || std::abs(p.dot(rect.axis_v)) > rect.half_h) {
    return std::nullopt;
  }
  return t;
}

std::optional<double> hit_sphere(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                 const Eigen::Vector3d& center, double radius) {
  const Eigen::Vector3d m = origin - center;
  const double b = m.dot(dir);
  const double c = m.squaredNorm() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double t = -b - sq;
  if (t <= 0.0) t = -b + sq;
  if (t <= 0.0) return std::nullopt;
  return t;
}

std::optional<double> hit_capsule(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                  const Capsule& cap) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Vector3d axis = cap.b - cap.a;
  const double len = axis.norm();
  if (len > 1e-9) {
    const Eigen::Vector3d n = axis / len;
    const Eigen::Vector3d m = origin - cap.a;
    const Eigen::Vector3d md = m - m.dot(n) * n;
    const Eigen::Vector3d dd = dir - dir.dot(n) * n;
    const double a = dd.squaredNorm();
    if (a > 1e-14) {
      const double b = md.dot(dd);
      const double c = md.squaredNorm() - cap.radius * cap.radius;
      const double disc = b * b - a * c;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (double t : {(-b - sq) / a, (-b + sq) / a}) {
          if (t <= 0.0) continue;
          const double s = (origin + t * dir - cap.a).dot(n);
          if (s >= 0.0 && s <= len && t < best) best = t;
        }
      }
    }
  }
  for (const auto& end : {cap.a, cap.b}) {
    if (auto t = hit_sphere(origin, dir, end, cap.radius); t && *t < best) best = *t;
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

/// Arm capsule for one camera pose: hangs from the plane's bottom-edge center
/// toward a point that projects below the frame, so its silhouette always
/// reaches the image bottom the way a forearm enters the field of view.
Capsule make_arm(const SceneSpec& spec, const CameraRig& rig) {
  Capsule cap;
  cap.radius = spec.arm_radius;
  const Eigen::Vector3d v_axis = spec.plane_pose.block<3, 1>(0, 1);
  const Eigen::Vector3d center = spec.plane_pose.block<3, 1>(0, 3);
  cap.a = center - v_axis * (spec.plane_height / 2.0);

  const Eigen::Matrix4d world_to_cam = rig.world_to_cam();
  const Eigen::Vector3d a_cam = (world_to_cam * cap.a.homogeneous()).head<3>();
  const auto a_pix = project_to_pixel(rig, a_cam);
  if (a_pix) {
    const double range = a_cam.norm();
    const ImagePlanePoint ip =
        pixel_to_image_plane(rig, a_pix->x(), static_cast<double>(rig.height - 1 + 60));
    const Eigen::Vector3d dir_cam =
        Eigen::Vector3d(-ip.u, -ip.v, 1.0) / std::sqrt(ip.u * ip.u + ip.v * ip.v + 1.0);
    const Eigen::Vector3d dir_world = rig.rotation() * dir_cam;
    cap.b = rig.translation() + dir_world * (range + 150.0);
  } else {
    cap.b = cap.a - v_axis * 800.0;  // plane behind the camera, fall back to straight down
  }
  return cap;
}

}  // namespace

Eigen::Matrix4d look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                        const Eigen::Vector3d& up_hint) {
  const Eigen::Vector3d fwd = (target - eye).normalized();
  Eigen::Vector3d up = up_hint - up_hint.dot(fwd) * fwd;
  if (up.norm() < 1e-9) {
    up = Eigen::Vector3d::UnitY() - Eigen::Vector3d::UnitY().dot(fwd) * fwd;
  }
  up.normalize();
  const Eigen::Vector3d left = up.cross(fwd);
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 1>(0, 0) = left;
  m.block<3, 1>(0, 1) = up;
  m.block<3, 1>(0, 2) = fwd;
  m.block<3, 1>(0, 3) = eye;
  return m;
}

RenderedFrame render_scene(const SceneSpec& spec, const CameraRig& rig, const NoiseSpec& noise) {
  spec.validate();
  noise.validate();
  rig.validate();

  Rectangle rect;
  rect.center = spec.plane_pose.block<3, 1>(0, 3);
  rect.axis_u = spec.plane_pose.block<3, 1>(0, 0);
  rect.axis_v = spec.plane_pose.block<3, 1>(0, 1);
  rect.normal = spec.plane_pose.block<3, 1>(0, 2);
  rect.half_w = spec.plane_width / 2.0;
  rect.half_h = spec.plane_height / 2.0;

  std::optional<Capsule> arm;
  if (spec.arm_enabled) arm = make_arm(spec, rig);

  const Eigen::Vector3d origin = rig.translation();
  const Eigen::Matrix3d rot = rig.rotation();

  const int w = rig.width;
  const int h = rig.height;
  std::vector<std::uint16_t> depths(static_cast<std::size_t>(w) * h, 0);
  BinaryMask po_mask = BinaryMask::zeros(w, h);

  const double background =
      spec.background_mode == BackgroundMode::Far ? kFarBackgroundMm : 0.0;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const ImagePlanePoint ip = pixel_to_image_plane(rig, x, y);
      const Eigen::Vector3d dir_cam =
          Eigen::Vector3d(-ip.u, -ip.v, 1.0) / std::sqrt(ip.u * ip.u + ip.v * ip.v + 1.0);
      const Eigen::Vector3d dir = rot * dir_cam;

      double best = std::numeric_limits<double>::infinity();
      bool plane_nearest = false;
      if (auto t = hit_rectangle(origin, dir, rect)) {
        best = *t;
        plane_nearest = true;
      }
      if (arm) {
        if (auto t = hit_capsule(origin, dir, *arm); t && *t < best) {
          best = *t;
          plane_nearest = false;
        }
      }
      for (const auto& s : spec.clutter) {
        if (auto t = hit_sphere(origin, dir, s.center, s.radius); t && *t < best) {
          best = *t;
          plane_nearest = false;
        }
      }

      double depth = background;
      if (std::isfinite(best)) depth = best;
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (depth > 0.0) {
        depths[idx] = static_cast<std::uint16_t>(
            std::clamp<long long>(std::llround(depth), 1, 65535));
      }
      if (plane_nearest) po_mask.bits[idx] = 1;
    }
  }

  if (po_mask.count() == 0) {
    throw ConfigError("render_scene: plane is fully outside the camera frustum");
  }

  SceneTruth truth;
  truth.world_corners = spec.world_corners();
  const Eigen::Matrix4d world_to_cam = rig.world_to_cam();
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Vector3d cam_pt = (world_to_cam * truth.world_corners[i].homogeneous()).head<3>();
    const auto pix = project_to_pixel(rig, cam_pt);
    if (!pix) {
      throw ConfigError("render_scene: plane corner behind the camera");
    }
    truth.pixel_corners[i] = *pix;
  }
  truth.po_mask = std::move(po_mask);

  DepthFrame rendered(w, h, std::move(depths));
  return RenderedFrame{inject_noise(rendered, noise), std::move(truth)};
}

std::vector<RenderedFrame> render_sequence(const SceneSpec& spec, const CameraRig& rig,
                                           const NoiseSpec& noise,
                                           const std::vector<Eigen::Matrix4d>& trajectory,
                                           int threads) {
  if (trajectory.empty()) {
    throw ConfigError("render_sequence: trajectory must contain at least one pose");
  }
  std::vector<std::optional<RenderedFrame>> slots(trajectory.size());

  auto render_one = [&](std::size_t i) {
    CameraRig posed = rig;
    posed.cam_to_world = trajectory[i];
    NoiseSpec frame_noise = noise;
    frame_noise.seed = noise.seed + i;
    slots[i] = render_scene(spec, posed, frame_noise);
  };

  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(trajectory.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < trajectory.size(); ++i) render_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next.fetch_add(1); i < trajectory.size(); i = next.fetch_add(1)) {
            render_one(i);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<RenderedFrame> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<std::uint8_t> boundary_band(const DepthFrame& frame) {
  constexpr int kGapMm = 20;
  constexpr int kBandPx = 3;
  const int w = frame.width();
  const int h = frame.height();
  std::vector<std::uint8_t> seed(static_cast<std::size_t>(w) * h, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int d = frame.at(x, y);
      if (d == 0) continue;
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
        const int nd = frame.at(nx[k], ny[k]);
        if (nd == 0 || std::abs(nd - d) > kGapMm) {
          seed[static_cast<std::size_t>(y) * w + x] = 1;
          break;
        }
      }
    }
  }

  // Chebyshev dilation by kBandPx.
  std::vector<std::uint8_t> band = seed;
  for (int step = 0; step < kBandPx; ++step) {
    std::vector<std::uint8_t> next = band;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (band[static_cast<std::size_t>(y) * w + x]) continue;
        bool near = false;
        for (int dy = -1; dy <= 1 && !near; ++dy) {
          for (int dx = -1; dx <= 1 && !near; ++dx) {
            const int xx = x + dx;
            const int yy = y + dy;
            if (xx < 0 || xx >= w || yy < 0 || yy >= h) continue;
            near = band[static_cast<std::size_t>(yy) * w + xx] != 0;
          }
        }
        if (near) next[static_cast<std::size_t>(y) * w + x] = 1;
      }
    }
    band.swap(next);
  }
  return band;
}

DepthFrame inject_noise(const DepthFrame& frame, const NoiseSpec& noise) {
  noise.validate();
  if (noise.sigma == 0.0 && noise.dropout_prob == 0.0) {
    return frame;
  }

  std::vector<std::uint8_t> band;
  if (noise.sigma > 0.0 && noise.boundary_sigma_scale != 1.0) {
    band = boundary_band(frame);
  }

  Rng rng(noise.seed);
  std::vector<std::uint16_t> out(frame.depths().begin(), frame.depths().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == 0) continue;
    if (noise.sigma > 0.0) {
      const double scale = (!band.empty() && band[i]) ? noise.boundary_sigma_scale : 1.0;
      const double perturbed = static_cast<double>(out[i]) + rng.normal() * noise.sigma * scale;
      out[i] = static_cast<std::uint16_t>(std::clamp<long long>(std::llround(perturbed), 1, 65535));
    }
    if (noise.dropout_prob > 0.0 && rng.uniform01() < noise.dropout_prob) {
      out[i] = 0;
    }
  }
  return DepthFrame(frame.width(), frame.height(), std::move(out));
}

std::vector<Eigen::Matrix4d> orbit_trajectory(const SceneSpec& spec, const CameraRig& rig,
                                              const OrbitParams& params) {
  if (params.count < 1) {
    throw ConfigError("orbit_trajectory: count must be >= 1");
  }
  spec.validate();

  const Eigen::Vector3d center = spec.plane_pose.block<3, 1>(0, 3);
  const Eigen::Vector3d u_axis = spec.plane_pose.block<3, 1>(0, 0);
  const Eigen::Vector3d v_axis = spec.plane_pose.block<3, 1>(0, 1);
  const Eigen::Vector3d normal = spec.plane_pose.block<3, 1>(0, 2);
  const Eigen::Vector3d gaze = center - v_axis * params.gaze_drop_mm;
  const auto corners = spec.world_corners();

  Rng rng(derive_seed(params.seed, 0, "orbit"));
  const double deg = 3.141592653589793238462643383279502884 / 180.0;

  std::vector<Eigen::Matrix4d> poses;
  poses.reserve(static_cast<std::size_t>(params.count));
  for (int i = 0; i < params.count; ++i) {
    // Sweep azimuth back and forth across the range while the distance walks
    // the requested interval; jitter keeps poses from aligning on a lattice.
    const double phase = params.count > 1 ? static_cast<double>(i) / (params.count - 1) : 0.5;
    double azimuth = params.max_azimuth_deg * std::sin(phase * 6.0 * 3.14159265358979324) +
                     rng.uniform(-3.0, 3.0);
    double elevation = params.max_elevation_deg * std::sin(phase * 4.0 * 3.14159265358979324 + 1.3) +
                       rng.uniform(-2.0, 2.0);
    azimuth = std::clamp(azimuth, -params.max_azimuth_deg, params.max_azimuth_deg);
    elevation = std::clamp(elevation, -params.max_elevation_deg, params.max_elevation_deg);
    double dist = params.dist_min_mm + (params.dist_max_mm - params.dist_min_mm) * phase +
                  rng.uniform(-10.0, 10.0);
    dist = std::clamp(dist, params.dist_min_mm, params.dist_max_mm);

    Eigen::Matrix4d pose = Eigen::Matrix4d::Identity();
    bool placed = false;
    for (int attempt = 0; attempt < 48 && !placed; ++attempt) {
      const Eigen::Vector3d dir = (Eigen::AngleAxisd(azimuth * deg, v_axis) *
                                   Eigen::AngleAxisd(elevation * deg, u_axis) * normal)
                                      .normalized();
      pose = look_at(center + dir * dist, gaze, v_axis);

      CameraRig posed = rig;
      posed.cam_to_world = pose;
      const Eigen::Matrix4d world_to_cam = posed.world_to_cam();
      bool ok = true;
      for (const auto& c : corners) {
        const Eigen::Vector3d cam_pt = (world_to_cam * c.homogeneous()).head<3>();
        const auto pix = project_to_pixel(posed, cam_pt);
        if (!pix || pix->x() < params.margin_px || pix->x() > rig.width - 1 - params.margin_px ||
            pix->y() < params.margin_px || pix->y() > rig.height - 1 - params.margin_px ||
            pix->y() > 0.72 * rig.height) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed = true;
      } else {
        // Flatten the view a little, then back off if the range is too close.
        azimuth *= 0.8;
        elevation *= 0.8;
        if (attempt >= 24) dist = std::min(params.dist_max_mm, dist * 1.05);
      }
    }
    if (!placed) {
      throw ConfigError("orbit_trajectory: could not fit the plane in frame at pose " +
                        std::to_string(i));
    }
    poses.push_back(pose);
  }
  return poses;
}

}  // namespace planar
