#pragma once

#include <filesystem>

#include "planar/camera_rig.hpp"
#include "planar/depth_frame.hpp"

namespace planar {

/// Depth frames travel as 16-bit binary PGM ("P5", maxval 65535, big-endian
/// samples). Loading anything else is an error, one PgmError kind per failure
/// mode. Round trip through save/load is bit-exact.
DepthFrame load_depth_frame(const std::filesystem::path& path);
void save_depth_frame(const DepthFrame& frame, const std::filesystem::path& path);

/// Camera rig file: JSON object with keys width, height, fx, fy, cx, cy,
/// k1, k2, cam_to_world (16 reals, row-major). k1/k2 default to 0 when absent;
/// everything else is required. Matrices whose rotation block fails
/// ||R^T R - I||_inf <= 1e-6 or has det <= 0 are rejected; accepted ones are
/// snapped to the nearest exact rotation so the in-memory rig meets the
/// tighter type invariant.
CameraRig load_camera_rig(const std::filesystem::path& path);
void save_camera_rig(const CameraRig& rig, const std::filesystem::path& path);

}  // namespace planar
