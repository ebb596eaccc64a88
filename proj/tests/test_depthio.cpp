#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "planar/depth_io.hpp"
#include "planar/errors.hpp"
#include "planar/rng.hpp"

using namespace planar;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "planar_test_depthio";
  fs::create_directories(dir);
  return dir;
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

CameraRig basic_rig() {
  CameraRig rig;
  rig.width = 488;
  rig.height = 450;
  rig.fx = 350.0;
  rig.fy = 350.0;
  rig.cx = 243.5;
  rig.cy = 224.5;
  return rig;
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  const Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  return q.normalized().toRotationMatrix();
}

}  // namespace

TEST_CASE("pgm: handcrafted 16-bit file loads bit-exactly") {
  const fs::path path = test_dir() / "hand.pgm";
  std::string bytes = "P5\n4 3\n65535\n";
  for (int i = 0; i < 12; ++i) {
    bytes.push_back(static_cast<char>(500 >> 8));
    bytes.push_back(static_cast<char>(500 & 0xff));
  }
  write_bytes(path, bytes);

  const DepthFrame frame = load_depth_frame(path);
  CHECK(frame.width() == 4);
  CHECK(frame.height() == 3);
  for (auto d : frame.depths()) CHECK(d == 500);
}

TEST_CASE("pgm: 8-bit maxval is an unsupported-bit-depth error") {
  const fs::path path = test_dir() / "8bit.pgm";
  write_bytes(path, std::string("P5\n2 2\n255\n") + std::string(4, '\0'));
  try {
    load_depth_frame(path);
    FAIL("expected PgmError");
  } catch (const PgmError& e) {
    CHECK(e.kind() == PgmError::Kind::UnsupportedBitDepth);
  }
}

TEST_CASE("pgm: malformed header and truncated payload are distinct errors") {
  const fs::path bad_magic = test_dir() / "magic.pgm";
  write_bytes(bad_magic, "P2\n2 2\n65535\n");
  try {
    load_depth_frame(bad_magic);
    FAIL("expected PgmError");
  } catch (const PgmError& e) {
    CHECK(e.kind() == PgmError::Kind::MalformedHeader);
  }

  const fs::path truncated = test_dir() / "short.pgm";
  write_bytes(truncated, std::string("P5\n4 4\n65535\n") + std::string(7, '\x01'));
  try {
    load_depth_frame(truncated);
    FAIL("expected PgmError");
  } catch (const PgmError& e) {
    CHECK(e.kind() == PgmError::Kind::TruncatedPayload);
  }

  const fs::path bad_dims = test_dir() / "dims.pgm";
  write_bytes(bad_dims, "P5\n0 3\n65535\n");
  CHECK_THROWS_AS(load_depth_frame(bad_dims), PgmError);
}

TEST_CASE("pgm: save/load round trip is identity on random frames") {
  Rng rng(7);
  const fs::path path = test_dir() / "roundtrip.pgm";
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 1 + static_cast<int>(rng.uniform_index(40));
    const int h = 1 + static_cast<int>(rng.uniform_index(40));
    std::vector<std::uint16_t> depths(static_cast<std::size_t>(w) * h);
    for (auto& d : depths) d = static_cast<std::uint16_t>(rng.uniform_index(65536));
    const DepthFrame frame(w, h, depths);
    save_depth_frame(frame, path);
    CHECK(load_depth_frame(path) == frame);
  }
}

TEST_CASE("pgm: zero frame and 65535 boundary survive the round trip") {
  const fs::path path = test_dir() / "edge.pgm";
  const DepthFrame zeros = DepthFrame::filled(488, 450, 0);
  save_depth_frame(zeros, path);
  CHECK(load_depth_frame(path) == zeros);

  DepthFrame maxed = DepthFrame::filled(3, 3, 65535);
  save_depth_frame(maxed, path);
  CHECK(load_depth_frame(path) == maxed);
}

TEST_CASE("rig: identity transform loads and validates") {
  const fs::path path = test_dir() / "rig.json";
  save_camera_rig(basic_rig(), path);
  const CameraRig rig = load_camera_rig(path);
  CHECK(rig.cam_to_world == Eigen::Matrix4d::Identity());
  CHECK(rig.fx == 350.0);
  CHECK(rig.k1 == 0.0);
}

TEST_CASE("rig: scaled rotation block is rejected as non-rigid") {
  CameraRig rig = basic_rig();
  rig.cam_to_world.topLeftCorner<3, 3>() *= 2.0;  // det 8
  const fs::path path = test_dir() / "scaled.json";
  save_camera_rig(rig, path);
  try {
    load_camera_rig(path);
    FAIL("expected RigError");
  } catch (const RigError& e) {
    CHECK(e.kind() == RigError::Kind::NonRigid);
  }
}

TEST_CASE("rig: missing required field is rejected") {
  const fs::path path = test_dir() / "missing.json";
  write_bytes(path, R"({"width":488,"height":450,"fx":350,"fy":350,"cx":243.5})");
  try {
    load_camera_rig(path);
    FAIL("expected RigError");
  } catch (const RigError& e) {
    CHECK(e.kind() == RigError::Kind::MissingField);
  }
}

TEST_CASE("rig: acceptance boundary follows the 1e-6 orthonormality gate") {
  Rng rng(11);
  const fs::path path = test_dir() / "gate.json";
  for (int trial = 0; trial < 20; ++trial) {
    CameraRig rig = basic_rig();
    Eigen::Matrix3d r = random_rotation(rng);
    // Perturb one entry; size decides which side of the gate we land on.
    const double eps = (trial % 2 == 0) ? 2e-7 : 5e-5;
    r(0, 1) += eps;
    rig.cam_to_world.topLeftCorner<3, 3>() = r;

    const double err = orthonormality_error(r);
    save_camera_rig(rig, path);
    if (err <= 1e-6) {
      const CameraRig loaded = load_camera_rig(path);
      // Accepted matrices are snapped to an exact rotation.
      CHECK(orthonormality_error(loaded.rotation()) <= 1e-9);
    } else {
      CHECK_THROWS_AS(load_camera_rig(path), RigError);
    }
  }
}

TEST_CASE("undistort: zero distortion is the exact affine formula") {
  const CameraRig rig = basic_rig();
  const ImagePlanePoint p = pixel_to_image_plane(rig, 100.0, 200.0);
  CHECK(p.u == (100.0 - rig.cx) / rig.fx);
  CHECK(p.v == (200.0 - rig.cy) / rig.fy);

  const ImagePlanePoint principal = pixel_to_image_plane(rig, rig.cx, rig.cy);
  CHECK(principal.u == 0.0);
  CHECK(principal.v == 0.0);

  CameraRig unit = basic_rig();
  unit.fx = unit.fy = 1.0;
  unit.cx = unit.cy = 0.0;
  const ImagePlanePoint q = pixel_to_image_plane(unit, 1.0, 0.0);
  CHECK(q.u == 1.0);
  CHECK(q.v == 0.0);
}

TEST_CASE("undistort: k1=0.1 matches an independent fixed-point oracle") {
  CameraRig rig = basic_rig();
  rig.k1 = 0.1;
  rig.k2 = -0.02;

  const double u = 300.0, v = 150.0;
  const ImagePlanePoint p = pixel_to_image_plane(rig, u, v);

  // Oracle: plain fixed-point iteration written out longhand.
  const double xd = (u - rig.cx) / rig.fx;
  const double yd = (v - rig.cy) / rig.fy;
  double x = xd, y = yd;
  for (int i = 0; i < 200; ++i) {
    const double r2 = x * x + y * y;
    const double s = 1.0 + rig.k1 * r2 + rig.k2 * r2 * r2;
    x = xd / s;
    y = yd / s;
  }
  CHECK(p.u == doctest::Approx(x).epsilon(1e-9));
  CHECK(p.v == doctest::Approx(y).epsilon(1e-9));

  // Forward distortion of the result reproduces the normalized input.
  const double r2 = p.u * p.u + p.v * p.v;
  const double s = 1.0 + rig.k1 * r2 + rig.k2 * r2 * r2;
  CHECK(std::abs(p.u * s - xd) <= 1e-9);
  CHECK(std::abs(p.v * s - yd) <= 1e-9);
}

TEST_CASE("undistort: forward(inverse(p)) = p within 1e-9 over random pixels") {
  Rng rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    CameraRig rig = basic_rig();
    rig.k1 = rng.uniform(-0.15, 0.15);
    rig.k2 = rng.uniform(-0.03, 0.03);
    const double u = rng.uniform(0.0, rig.width - 1.0);
    const double v = rng.uniform(0.0, rig.height - 1.0);

    const ImagePlanePoint p = pixel_to_image_plane(rig, u, v);
    const Eigen::Vector2d d = distort(rig, Eigen::Vector2d(p.u, p.v));
    CHECK(std::abs(d.x() - (u - rig.cx) / rig.fx) <= 1e-9);
    CHECK(std::abs(d.y() - (v - rig.cy) / rig.fy) <= 1e-9);
  }
}

TEST_CASE("undistort: pathological distortion fails loudly") {
  CameraRig rig = basic_rig();
  rig.fx = rig.fy = 10.0;  // huge normalized coords at the frame edge
  rig.k1 = -3.0;
  rig.k2 = 4.0;
  CHECK_THROWS(pixel_to_image_plane(rig, 487.0, 449.0));
}
