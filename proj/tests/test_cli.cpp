#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "planar/depth_io.hpp"
#include "planar/render.hpp"

using namespace planar;
namespace fs = std::filesystem;

namespace {

std::string tool() {
  const char* bin = std::getenv("PLANARTRACK_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "PLANARTRACK_BIN must point at the planartrack binary");
  return bin;
}

int run(const std::string& args) {
  const std::string cmd = tool() + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "planar_test_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_default_scene(const fs::path& path, bool arm = true) {
  SceneSpec spec;
  spec.arm_enabled = arm;
  save_scene_spec(spec, path);
}

void write_default_rig(const fs::path& path) {
  CameraRig rig;
  rig.width = 488;
  rig.height = 450;
  rig.fx = rig.fy = 350.0;
  rig.cx = 243.5;
  rig.cy = 224.5;
  save_camera_rig(rig, path);
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_csv_column(const fs::path& csv, const std::string& column, int row) {
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> names;
  std::stringstream hs(header);
  std::string tok;
  while (std::getline(hs, tok, ',')) names.push_back(tok);
  std::size_t col = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == column) col = i;
  }
  REQUIRE(col < names.size());

  std::string line;
  for (int i = 0; i <= row; ++i) REQUIRE(static_cast<bool>(std::getline(in, line)));
  std::stringstream ls(line);
  std::string value;
  for (std::size_t i = 0; i <= col; ++i) std::getline(ls, value, ',');
  return value;
}

}  // namespace

TEST_CASE("cli: synth is deterministic and writes a manifest") {
  const fs::path dir = work_dir();
  write_default_scene(dir / "scene.json");
  write_default_rig(dir / "rig.json");

  const std::string common = "synth --scene " + (dir / "scene.json").string() + " --rig " +
                             (dir / "rig.json").string() +
                             " --frames 3 --sigma 1.8 --seed 42 --dist-min 450 --dist-max 700";
  CHECK(run(common + " --out " + (dir / "a").string()) == 0);
  CHECK(run(common + " --out " + (dir / "b").string()) == 0);

  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04d.pgm", i);
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
  CHECK(fs::exists(dir / "a" / "manifest.json"));
  CHECK(fs::exists(dir / "a" / "frame_0000.truth.json"));
  CHECK(fs::exists(dir / "a" / "frame_0000.mask.pgm"));
}

TEST_CASE("cli: zero frame count is a usage error") {
  const fs::path dir = work_dir();
  write_default_scene(dir / "scene.json");
  write_default_rig(dir / "rig.json");
  CHECK(run("synth --scene " + (dir / "scene.json").string() + " --rig " +
            (dir / "rig.json").string() + " --frames 0 --out " + (dir / "x").string()) != 0);
}

TEST_CASE("cli: track isolates per-frame errors and keeps exit code 0") {
  const fs::path dir = work_dir();
  write_default_scene(dir / "scene.json");
  write_default_rig(dir / "rig.json");
  REQUIRE(run("synth --scene " + (dir / "scene.json").string() + " --rig " +
              (dir / "rig.json").string() + " --frames 2 --seed 7 --dist-min 450 --dist-max 650 --out " +
              (dir / "frames").string()) == 0);

  // Sneak an all-zero frame into the set.
  save_depth_frame(DepthFrame::filled(488, 450, 0), dir / "frames" / "frame_0002.pgm");

  CHECK(run("track --rig " + (dir / "rig.json").string() + " --frames " +
            (dir / "frames").string() + " --out " + (dir / "results.csv").string()) == 0);

  CHECK(read_csv_column(dir / "results.csv", "error_code", 0) == "ok");
  CHECK(read_csv_column(dir / "results.csv", "error_code", 1) == "ok");
  CHECK(read_csv_column(dir / "results.csv", "error_code", 2) == "empty-frame");
}

TEST_CASE("cli: even patch size is rejected") {
  const fs::path dir = work_dir();
  write_default_rig(dir / "rig.json");
  fs::create_directories(dir / "frames");
  save_depth_frame(DepthFrame::filled(8, 8, 500), dir / "frames" / "frame_0000.pgm");
  CHECK(run("track --rig " + (dir / "rig.json").string() + " --frames " +
            (dir / "frames").string() + " --patch 4 --out " + (dir / "r.csv").string()) != 0);
}

TEST_CASE("cli: single-size sweep rows are sorted and tagged with the size") {
  const fs::path dir = work_dir();
  write_default_scene(dir / "scene.json");
  write_default_rig(dir / "rig.json");
  REQUIRE(run("synth --scene " + (dir / "scene.json").string() + " --rig " +
              (dir / "rig.json").string() + " --frames 2 --seed 3 --dist-min 450 --dist-max 650 --out " +
              (dir / "frames").string()) == 0);

  CHECK(run("sweep --rig " + (dir / "rig.json").string() + " --frames " +
            (dir / "frames").string() + " --sizes 5,3 --out " + (dir / "sweep.csv").string()) == 0);
  // Ascending sizes regardless of flag order.
  CHECK(read_csv_column(dir / "sweep.csv", "patch_size", 0) == "3");
  CHECK(read_csv_column(dir / "sweep.csv", "patch_size", 2) == "5");
  CHECK(read_csv_column(dir / "sweep.csv", "error_code", 0) == "ok");
  // World-space corner error is meaningful because synth wrote per-frame rig
  // sidecars with each orbit pose.
  CHECK(std::stod(read_csv_column(dir / "sweep.csv", "mean_corner_err_mm", 0)) < 10.0);
}

TEST_CASE("cli: randerr on identical frames reports zero, single frame errors out") {
  const fs::path dir = work_dir();
  fs::create_directories(dir / "series");
  const DepthFrame frame = DepthFrame::filled(32, 32, 500);
  save_depth_frame(frame, dir / "series" / "frame_0000.pgm");
  save_depth_frame(frame, dir / "series" / "frame_0001.pgm");
  save_depth_frame(DepthFrame::filled(32, 32, 65535), dir / "mask.pgm");

  CHECK(run("randerr --frames " + (dir / "series").string() + " --mask " +
            (dir / "mask.pgm").string() + " --out " + (dir / "report.csv").string()) == 0);
  CHECK(read_csv_column(dir / "report.csv", "mean_mm", 0) == "0");
  CHECK(read_csv_column(dir / "report.csv", "max_mm", 0) == "0");

  fs::create_directories(dir / "single");
  save_depth_frame(frame, dir / "single" / "frame_0000.pgm");
  CHECK(run("randerr --frames " + (dir / "single").string() + " --mask " +
            (dir / "mask.pgm").string() + " --out " + (dir / "r2.csv").string()) != 0);
}

TEST_CASE("cli: baseline subcommand produces the comparison table") {
  const fs::path dir = work_dir();
  write_default_scene(dir / "scene.json", /*arm=*/false);
  write_default_rig(dir / "rig.json");
  REQUIRE(run("synth --scene " + (dir / "scene.json").string() + " --rig " +
              (dir / "rig.json").string() +
              " --frames 2 --seed 9 --dist-min 500 --dist-max 600 --azimuth-max 8 "
              "--elevation-max 5 --gaze-drop 0 --out " +
              (dir / "frames").string()) == 0);

  CHECK(run("baseline --method ransac --rig " + (dir / "rig.json").string() + " --frames " +
            (dir / "frames").string() + " --seed 1 --out " + (dir / "base.csv").string()) == 0);
  CHECK(read_csv_column(dir / "base.csv", "method", 0) == "ransac");
  CHECK(read_csv_column(dir / "base.csv", "accuracy_kind", 0) == "dice");
  // Tracker Dice reported alongside.
  CHECK(read_csv_column(dir / "base.csv", "method", 1) == "tracker");

  CHECK(run("baseline --method icp --rig " + (dir / "rig.json").string() + " --frames " +
            (dir / "frames").string() + " --seed 1 --out " + (dir / "icp.csv").string()) == 0);
  CHECK(read_csv_column(dir / "icp.csv", "method", 0) == "icp");
  CHECK(read_csv_column(dir / "icp.csv", "accuracy_kind", 0) == "mm");
}
