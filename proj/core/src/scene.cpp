#include "planar/scene.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "planar/depth_io.hpp"
#include "planar/errors.hpp"

namespace planar {

namespace {

nlohmann::json read_json(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(std::string(what) + ": cannot open " + path.string());
  }
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(what) + ": parse error in " + path.string() + ": " + e.what());
  }
}

Eigen::Matrix4d matrix_from_array(const nlohmann::json& arr, const char* key) {
  if (!arr.is_array() || arr.size() != 16) {
    throw ConfigError(std::string("scene: ") + key + " must be an array of 16 reals");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m(r, c) = arr[static_cast<std::size_t>(4 * r + c)].get<double>();
    }
  }
  return m;
}

std::vector<double> matrix_to_array(const Eigen::Matrix4d& m) {
  std::vector<double> out(16);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out[static_cast<std::size_t>(4 * r + c)] = m(r, c);
    }
  }
  return out;
}

}  // namespace

void SceneSpec::validate() const {
  if (!(plane_width > 0.0) || !(plane_height > 0.0)) {
    throw ConfigError("scene: plane dimensions must be positive");
  }
  if (arm_enabled && !(arm_radius > 0.0)) {
    throw ConfigError("scene: arm_radius must be positive when the arm is enabled");
  }
  const Eigen::Matrix3d r = plane_pose.topLeftCorner<3, 3>();
  if (orthonormality_error(r) > 1e-6 || r.determinant() <= 0.0) {
    throw ConfigError("scene: plane_pose rotation block is not rigid");
  }
  for (const auto& s : clutter) {
    if (!(s.radius > 0.0)) {
      throw ConfigError("scene: clutter sphere radius must be positive");
    }
  }
}

std::array<Eigen::Vector3d, 4> SceneSpec::world_corners() const {
  const double hw = plane_width / 2.0;
  const double hh = plane_height / 2.0;
  const std::array<Eigen::Vector3d, 4> local = {
      Eigen::Vector3d(-hw, -hh, 0.0),
      Eigen::Vector3d(hw, -hh, 0.0),
      Eigen::Vector3d(hw, hh, 0.0),
      Eigen::Vector3d(-hw, hh, 0.0),
  };
  std::array<Eigen::Vector3d, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Vector4d h = plane_pose * Eigen::Vector4d(local[i].x(), local[i].y(), local[i].z(), 1.0);
    out[i] = h.head<3>();
  }
  return out;
}

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0)) {
    throw ConfigError("noise: sigma must be >= 0");
  }
  if (!(boundary_sigma_scale >= 0.0)) {
    throw ConfigError("noise: boundary_sigma_scale must be >= 0");
  }
  if (!(dropout_prob >= 0.0) || dropout_prob >= 1.0) {
    throw ConfigError("noise: dropout_prob must be in [0, 1)");
  }
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path, "scene");
  SceneSpec spec;
  if (j.contains("plane_width")) spec.plane_width = j["plane_width"].get<double>();
  if (j.contains("plane_height")) spec.plane_height = j["plane_height"].get<double>();
  if (j.contains("plane_pose")) spec.plane_pose = matrix_from_array(j["plane_pose"], "plane_pose");
  if (j.contains("arm_enabled")) spec.arm_enabled = j["arm_enabled"].get<bool>();
  if (j.contains("arm_radius")) spec.arm_radius = j["arm_radius"].get<double>();
  if (j.contains("background_mode")) {
    const std::string mode = j["background_mode"].get<std::string>();
    if (mode == "no-return") {
      spec.background_mode = BackgroundMode::NoReturn;
    } else if (mode == "far") {
      spec.background_mode = BackgroundMode::Far;
    } else {
      throw ConfigError("scene: background_mode must be 'no-return' or 'far', got '" + mode + "'");
    }
  }
  if (j.contains("clutter")) {
    for (const auto& cj : j["clutter"]) {
      ClutterSphere s;
      const auto& c = cj.at("center");
      s.center = Eigen::Vector3d(c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>());
      s.radius = cj.at("radius").get<double>();
      spec.clutter.push_back(s);
    }
  }
  spec.validate();
  return spec;
}

void save_scene_spec(const SceneSpec& spec, const std::filesystem::path& path) {
  nlohmann::json j;
  j["plane_width"] = spec.plane_width;
  j["plane_height"] = spec.plane_height;
  j["plane_pose"] = matrix_to_array(spec.plane_pose);
  j["arm_enabled"] = spec.arm_enabled;
  j["arm_radius"] = spec.arm_radius;
  j["background_mode"] = spec.background_mode == BackgroundMode::Far ? "far" : "no-return";
  if (!spec.clutter.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : spec.clutter) {
      arr.push_back({{"center", {s.center.x(), s.center.y(), s.center.z()}}, {"radius", s.radius}});
    }
    j["clutter"] = arr;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ConfigError("scene: cannot open for write " + path.string());
  }
  out << j.dump(2) << "\n";
}

NoiseSpec load_noise_spec(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path, "noise");
  NoiseSpec noise;
  if (j.contains("sigma")) noise.sigma = j["sigma"].get<double>();
  if (j.contains("boundary_sigma_scale")) noise.boundary_sigma_scale = j["boundary_sigma_scale"].get<double>();
  if (j.contains("dropout_prob")) noise.dropout_prob = j["dropout_prob"].get<double>();
  if (j.contains("seed")) noise.seed = j["seed"].get<std::uint64_t>();
  noise.validate();
  return noise;
}

void save_scene_truth(const SceneTruth& truth, const std::filesystem::path& json_path,
                      const std::filesystem::path& mask_path) {
  save_depth_frame(mask_to_frame(truth.po_mask), mask_path);

  nlohmann::json j;
  std::vector<double> wc;
  for (const auto& c : truth.world_corners) {
    wc.push_back(c.x());
    wc.push_back(c.y());
    wc.push_back(c.z());
  }
  std::vector<double> pc;
  for (const auto& c : truth.pixel_corners) {
    pc.push_back(c.x());
    pc.push_back(c.y());
  }
  j["world_corners"] = wc;
  j["pixel_corners"] = pc;
  j["po_mask_path"] = mask_path.filename().string();

  std::ofstream out(json_path, std::ios::trunc);
  if (!out) {
    throw ConfigError("truth: cannot open for write " + json_path.string());
  }
  out << j.dump(2) << "\n";
}

SceneTruth load_scene_truth(const std::filesystem::path& json_path) {
  const nlohmann::json j = read_json(json_path, "truth");
  SceneTruth truth;
  const auto& wc = j.at("world_corners");
  const auto& pc = j.at("pixel_corners");
  if (wc.size() != 12 || pc.size() != 8) {
    throw ConfigError("truth: world_corners/pixel_corners have wrong arity in " + json_path.string());
  }
  for (std::size_t i = 0; i < 4; ++i) {
    truth.world_corners[i] = Eigen::Vector3d(wc[3 * i].get<double>(), wc[3 * i + 1].get<double>(),
                                             wc[3 * i + 2].get<double>());
    truth.pixel_corners[i] = Eigen::Vector2d(pc[2 * i].get<double>(), pc[2 * i + 1].get<double>());
  }
  const std::filesystem::path mask_path = json_path.parent_path() / j.at("po_mask_path").get<std::string>();
  truth.po_mask = frame_to_mask(load_depth_frame(mask_path));
  return truth;
}

}  // namespace planar
