// planartrack: synthetic depth scenes, planar-target tracking, patch-size
// sweeps, depth-repeatability reports, and ICP/RANSAC baseline comparisons,
// all driven from one seeded, manifest-recorded command line.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include "planar/baseline_eval.hpp"
#include "planar/csv.hpp"
#include "planar/depth_io.hpp"
#include "planar/metrics.hpp"
#include "planar/pipeline.hpp"
#include "planar/render.hpp"
#include "planar/rng.hpp"
#include "planar/sweep.hpp"
#include "planar/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace planar;

namespace {

// ---------------------------------------------------------------------------
// shared helpers

struct FrameSet {
  std::vector<fs::path> paths;
  std::vector<DepthFrame> frames;
};

bool is_frame_pgm(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() > 4 && name.ends_with(".pgm") && !name.ends_with(".mask.pgm") &&
         !name.ends_with("_map.pgm");
}

FrameSet load_frame_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ConfigError("frames: not a directory: " + dir.string());
  }
  FrameSet set;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_frame_pgm(entry.path())) {
      set.paths.push_back(entry.path());
    }
  }
  std::sort(set.paths.begin(), set.paths.end());
  if (set.paths.empty()) {
    throw ConfigError("frames: no frame .pgm files in " + dir.string());
  }
  for (const auto& p : set.paths) set.frames.push_back(load_depth_frame(p));
  return set;
}

std::vector<SceneTruth> load_truth_sidecars(const std::vector<fs::path>& frame_paths) {
  std::vector<SceneTruth> truths;
  for (const auto& p : frame_paths) {
    fs::path sidecar = p;
    sidecar.replace_extension("");  // frame_0000.pgm -> frame_0000
    sidecar += ".truth.json";
    if (!fs::exists(sidecar)) {
      throw ConfigError("truth sidecar missing: " + sidecar.string());
    }
    truths.push_back(load_scene_truth(sidecar));
  }
  return truths;
}

/// Per-frame camera pose: synth writes a rig sidecar per frame (the moving
/// camera's transform, the way a device feeds one per capture). Frames
/// without a sidecar use the base rig.
std::vector<CameraRig> load_rig_sidecars(const std::vector<fs::path>& frame_paths,
                                         const CameraRig& base) {
  std::vector<CameraRig> rigs;
  for (const auto& p : frame_paths) {
    fs::path sidecar = p;
    sidecar.replace_extension("");
    sidecar += ".rig.json";
    rigs.push_back(fs::exists(sidecar) ? load_camera_rig(sidecar) : base);
  }
  return rigs;
}

std::string frame_name(std::size_t index, const char* suffix) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04zu%s", index, suffix);
  return buf;
}

/// One manifest per run, written beside the outputs. The recorded argv is
/// fully resolved (every flag explicit, input paths absolute), so re-running
/// it reproduces the outputs; see README for the timing-column caveat.
struct ManifestBuilder {
  json doc;

  ManifestBuilder(const std::string& command, const std::vector<std::string>& argv) {
    doc["command"] = command;
    doc["argv"] = argv;
    doc["tool_version"] = kVersion;
    doc["inputs"] = json::array();
    doc["outputs"] = json::array();
    doc["error_tallies"] = json::object();
  }

  void input(const fs::path& p) { doc["inputs"].push_back(fs::absolute(p).string()); }
  void output(const fs::path& p) { doc["outputs"].push_back(fs::absolute(p).string()); }
  void tally(ErrorCode code) {
    const std::string key = to_string(code);
    doc["error_tallies"][key] = doc["error_tallies"].value(key, 0) + 1;
  }
  void write(const fs::path& dir) {
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("manifest: cannot write " + path.string());
    out << doc.dump(2) << "\n";
  }
};

std::string abs_str(const std::string& p) { return fs::absolute(p).string(); }

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
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

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string scene_path;
  std::string rig_path;
  std::string noise_path;
  std::string out_dir;
  int frames = 100;
  double sigma = -1.0;  // <0: keep value from --noise file / default
  double boundary_scale = -1.0;
  double dropout = -1.0;
  std::uint64_t seed = 0;
  std::string trajectory = "orbit";
  double dist_min = 300.0;
  double dist_max = 900.0;
  double azimuth_max = 25.0;
  double elevation_max = 15.0;
  double gaze_drop = 50.0;
  int threads = 1;
};

int run_synth(const SynthArgs& args) {
  const SceneSpec spec = load_scene_spec(args.scene_path);
  const CameraRig rig = load_camera_rig(args.rig_path);

  NoiseSpec noise;
  if (!args.noise_path.empty()) noise = load_noise_spec(args.noise_path);
  if (args.sigma >= 0.0) noise.sigma = args.sigma;
  if (args.boundary_scale >= 0.0) noise.boundary_sigma_scale = args.boundary_scale;
  if (args.dropout >= 0.0) noise.dropout_prob = args.dropout;
  noise.seed = derive_seed(args.seed, 0, "noise");
  noise.validate();

  std::vector<Eigen::Matrix4d> trajectory;
  if (args.trajectory == "orbit") {
    OrbitParams params;
    params.count = args.frames;
    params.dist_min_mm = args.dist_min;
    params.dist_max_mm = args.dist_max;
    params.max_azimuth_deg = args.azimuth_max;
    params.max_elevation_deg = args.elevation_max;
    params.gaze_drop_mm = args.gaze_drop;
    params.seed = derive_seed(args.seed, 0, "orbit");
    trajectory = orbit_trajectory(spec, rig, params);
  } else {
    // Static pose at mid-distance along the plane normal.
    const Eigen::Vector3d center = spec.plane_pose.block<3, 1>(0, 3);
    const Eigen::Vector3d v_axis = spec.plane_pose.block<3, 1>(0, 1);
    const Eigen::Vector3d normal = spec.plane_pose.block<3, 1>(0, 2);
    const double dist = (args.dist_min + args.dist_max) / 2.0;
    const Eigen::Matrix4d pose =
        look_at(center + normal * dist, center - v_axis * args.gaze_drop, v_axis);
    trajectory.assign(static_cast<std::size_t>(args.frames), pose);
  }

  const auto rendered = render_sequence(spec, rig, noise, trajectory, args.threads);

  const fs::path out_dir = args.out_dir;
  fs::create_directories(out_dir);

  ManifestBuilder manifest(
      "synth",
      {"synth", "--scene", abs_str(args.scene_path), "--rig", abs_str(args.rig_path), "--frames",
       std::to_string(args.frames), "--sigma", format_double(noise.sigma), "--boundary-scale",
       format_double(noise.boundary_sigma_scale), "--dropout", format_double(noise.dropout_prob),
       "--seed", std::to_string(args.seed), "--trajectory", args.trajectory, "--dist-min",
       format_double(args.dist_min), "--dist-max", format_double(args.dist_max), "--azimuth-max",
       format_double(args.azimuth_max), "--elevation-max", format_double(args.elevation_max),
       "--gaze-drop", format_double(args.gaze_drop), "--threads", std::to_string(args.threads),
       "--out", args.out_dir});
  manifest.input(args.scene_path);
  manifest.input(args.rig_path);
  manifest.doc["seed"] = args.seed;
  manifest.doc["config"] = {{"sigma", noise.sigma},
                            {"boundary_sigma_scale", noise.boundary_sigma_scale},
                            {"dropout_prob", noise.dropout_prob},
                            {"frames", args.frames},
                            {"trajectory", args.trajectory}};

  for (std::size_t i = 0; i < rendered.size(); ++i) {
    const fs::path frame_path = out_dir / frame_name(i, ".pgm");
    const fs::path truth_path = out_dir / frame_name(i, ".truth.json");
    const fs::path mask_path = out_dir / frame_name(i, ".mask.pgm");
    const fs::path rig_path = out_dir / frame_name(i, ".rig.json");
    save_depth_frame(rendered[i].frame, frame_path);
    save_scene_truth(rendered[i].truth, truth_path, mask_path);
    CameraRig posed = rig;
    posed.cam_to_world = trajectory[i];
    save_camera_rig(posed, rig_path);
    manifest.output(frame_path);
    manifest.output(truth_path);
    manifest.output(mask_path);
    manifest.output(rig_path);
    manifest.tally(ErrorCode::Ok);
  }
  manifest.write(out_dir);
  std::cout << "synth: wrote " << rendered.size() << " frame/truth pairs to " << out_dir.string()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// tracker config flags shared by track/sweep/baseline

void add_tracker_flags(CLI::App* cmd, TrackerConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "tracker config JSON (defaults otherwise)");
  cmd->add_option("--patch", cfg.patch_size, "patch size in px (odd)");
  cmd->add_option("--epsilon", cfg.simplify_epsilon, "outline simplification tolerance, px");
  cmd->add_option("--threshold-lo", cfg.threshold_lo, "lower depth threshold, mm");
  cmd->add_option("--threshold-hi", cfg.threshold_hi, "upper depth threshold, mm");
  cmd->add_option("--min-region", cfg.min_region_px, "minimum region size, px");
  cmd->add_option("--bottom-proximity", cfg.bottom_proximity_px, "bottom corner proximity, px");
}

TrackerConfig resolve_tracker_config(const CLI::App* cmd, const TrackerConfig& flag_values,
                                     const std::string& config_path) {
  TrackerConfig cfg;
  if (!config_path.empty()) cfg = load_tracker_config(config_path);
  // Explicit flags override the file.
  if (cmd->count("--patch")) cfg.patch_size = flag_values.patch_size;
  if (cmd->count("--epsilon")) cfg.simplify_epsilon = flag_values.simplify_epsilon;
  if (cmd->count("--threshold-lo")) cfg.threshold_lo = flag_values.threshold_lo;
  if (cmd->count("--threshold-hi")) cfg.threshold_hi = flag_values.threshold_hi;
  if (cmd->count("--min-region")) cfg.min_region_px = flag_values.min_region_px;
  if (cmd->count("--bottom-proximity")) cfg.bottom_proximity_px = flag_values.bottom_proximity_px;
  cfg.validate();
  return cfg;
}

json tracker_config_json(const TrackerConfig& cfg) {
  return {{"threshold_lo", cfg.threshold_lo},
          {"threshold_hi", cfg.threshold_hi},
          {"min_region_px", cfg.min_region_px},
          {"simplify_epsilon", cfg.simplify_epsilon},
          {"angle_lo_deg", cfg.angle_lo_deg},
          {"angle_hi_deg", cfg.angle_hi_deg},
          {"height_fraction", cfg.height_fraction},
          {"bottom_proximity_px", cfg.bottom_proximity_px},
          {"patch_size", cfg.patch_size},
          {"refine_window", cfg.refine_window},
          {"refine_max_iters", cfg.refine_max_iters},
          {"refine_shift_tol", cfg.refine_shift_tol}};
}

std::vector<std::string> tracker_argv_tail(const TrackerConfig& cfg) {
  return {"--patch",        std::to_string(cfg.patch_size),
          "--epsilon",      format_double(cfg.simplify_epsilon),
          "--threshold-lo", std::to_string(cfg.threshold_lo),
          "--threshold-hi", std::to_string(cfg.threshold_hi),
          "--min-region",   std::to_string(cfg.min_region_px),
          "--bottom-proximity", std::to_string(cfg.bottom_proximity_px)};
}

// ---------------------------------------------------------------------------
// track

int run_track(const std::string& rig_path, const std::string& frames_dir,
              const std::string& out_csv, const TrackerConfig& cfg, int threads) {
  const CameraRig rig = load_camera_rig(rig_path);
  const FrameSet set = load_frame_dir(frames_dir);
  const std::vector<CameraRig> rigs = load_rig_sidecars(set.paths, rig);

  std::vector<TargetResult> results(set.frames.size());
  parallel_for(set.frames.size(), threads,
               [&](std::size_t i) { results[i] = track_target(set.frames[i], rigs[i], cfg); });

  const fs::path out_path = out_csv;
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw ConfigError("track: cannot write " + out_path.string());

  out << "frame";
  for (int i = 0; i < 4; ++i) out << ",px" << i << "_x,px" << i << "_y,depth" << i << "_mm";
  for (int i = 0; i < 4; ++i) out << ",world" << i << "_x,world" << i << "_y,world" << i << "_z";
  out << ",center_x,center_y,center_z,normal_x,normal_y,normal_z,edge_u_mm,edge_v_mm,"
         "rms_planarity_mm,latency_ms,error_code\n";

  std::vector<std::string> argv = {"track",    "--rig", abs_str(rig_path), "--frames",
                                   abs_str(frames_dir), "--threads", std::to_string(threads)};
  const auto tail = tracker_argv_tail(cfg);
  argv.insert(argv.end(), tail.begin(), tail.end());
  argv.insert(argv.end(), {"--out", out_csv});
  ManifestBuilder manifest("track", argv);
  manifest.input(rig_path);
  for (const auto& p : set.paths) manifest.input(p);
  manifest.doc["config"] = tracker_config_json(cfg);

  for (std::size_t i = 0; i < results.size(); ++i) {
    const TargetResult& r = results[i];
    manifest.tally(r.status);
    std::vector<std::string> row{std::to_string(i)};
    if (r.ok()) {
      for (int c = 0; c < 4; ++c) {
        row.push_back(format_double(r.target.pixel_corners[static_cast<std::size_t>(c)].x()));
        row.push_back(format_double(r.target.pixel_corners[static_cast<std::size_t>(c)].y()));
        row.push_back(format_double(r.target.depths[static_cast<std::size_t>(c)]));
      }
      for (int c = 0; c < 4; ++c) {
        const auto& w = r.target.world_corners[static_cast<std::size_t>(c)];
        row.push_back(format_double(w.x()));
        row.push_back(format_double(w.y()));
        row.push_back(format_double(w.z()));
      }
      const PlanePose& pose = r.target.pose;
      for (double v : {pose.center.x(), pose.center.y(), pose.center.z(), pose.normal.x(),
                       pose.normal.y(), pose.normal.z(), pose.edge_u, pose.edge_v,
                       pose.rms_planarity}) {
        row.push_back(format_double(v));
      }
    } else {
      for (int c = 0; c < 33; ++c) row.push_back("");
    }
    row.push_back(format_double(r.latency_ms));
    row.push_back(to_string(r.status));
    out << join_csv_row(row);
  }
  out.close();

  manifest.output(out_path);
  manifest.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));

  std::size_t ok = 0;
  for (const auto& r : results) ok += r.ok() ? 1 : 0;
  std::cout << "track: " << ok << "/" << results.size() << " frames tracked, results in "
            << out_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep(const std::string& rig_path, const std::string& frames_dir,
              const std::string& out_csv, const TrackerConfig& cfg,
              const std::vector<int>& sizes) {
  const CameraRig rig = load_camera_rig(rig_path);
  const FrameSet set = load_frame_dir(frames_dir);
  const std::vector<SceneTruth> truths = load_truth_sidecars(set.paths);
  const std::vector<CameraRig> rigs = load_rig_sidecars(set.paths, rig);

  SweepOptions options;
  if (!sizes.empty()) options.sizes = sizes;

  const auto cells = patch_sweep(set.frames, truths, rigs, cfg, options);

  const fs::path out_path = out_csv;
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_sweep_csv(cells, out_path);

  std::vector<std::string> argv = {"sweep", "--rig", abs_str(rig_path), "--frames",
                                   abs_str(frames_dir)};
  std::string size_list;
  for (std::size_t i = 0; i < options.sizes.size(); ++i) {
    if (i) size_list += ",";
    size_list += std::to_string(options.sizes[i]);
  }
  argv.insert(argv.end(), {"--sizes", size_list});
  const auto tail = tracker_argv_tail(cfg);
  argv.insert(argv.end(), tail.begin(), tail.end());
  argv.insert(argv.end(), {"--out", out_csv});
  ManifestBuilder manifest("sweep", argv);
  manifest.input(rig_path);
  for (const auto& p : set.paths) manifest.input(p);
  manifest.doc["config"] = tracker_config_json(cfg);
  manifest.doc["config"]["sizes"] = options.sizes;
  for (const auto& c : cells) manifest.tally(c.status);
  manifest.output(out_path);
  manifest.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));

  std::cout << "sweep: " << cells.size() << " cells over " << options.sizes.size()
            << " sizes, table in " << out_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// randerr

int run_randerr(const std::string& frames_dir, const std::string& mask_path,
                const std::string& out_csv) {
  const FrameSet set = load_frame_dir(frames_dir);

  DepthSeries series;
  series.frames = set.frames;
  series.mask = frame_to_mask(load_depth_frame(mask_path));
  const RandomErrorResult err = random_error(series);

  const fs::path out_path = out_csv;
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw ConfigError("randerr: cannot write " + out_path.string());
  out << "mean_mm,sd_mm,min_mm,max_mm,frames,masked_px\n";
  out << join_csv_row({format_double(err.mean), format_double(err.sd), format_double(err.min),
                       format_double(err.max), std::to_string(series.frames.size()),
                       std::to_string(series.mask.count())});
  out.close();

  // Per-pixel map in centi-millimeters, 16-bit.
  fs::path map_path = out_path;
  map_path.replace_extension("");
  map_path += "_map.pgm";
  std::vector<std::uint16_t> map_px(err.map.size());
  for (std::size_t i = 0; i < err.map.size(); ++i) {
    map_px[i] = static_cast<std::uint16_t>(
        std::clamp<long long>(std::llround(err.map[i] * 100.0), 0, 65535));
  }
  save_depth_frame(DepthFrame(err.width, err.height, std::move(map_px)), map_path);

  ManifestBuilder manifest("randerr", {"randerr", "--frames", abs_str(frames_dir), "--mask",
                                       abs_str(mask_path), "--out", out_csv});
  manifest.input(mask_path);
  for (const auto& p : set.paths) manifest.input(p);
  manifest.output(out_path);
  manifest.output(map_path);
  manifest.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));

  std::cout << "randerr: mean " << err.mean << " mm over " << series.mask.count()
            << " px, report in " << out_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// baseline

int run_baseline(const std::string& rig_path, const std::string& frames_dir,
                 const std::string& out_csv, const std::string& method,
                 const TrackerConfig& tracker_cfg, double ransac_threshold, int ransac_iters,
                 const std::string& icp_init, double perturb_deg, double perturb_mm,
                 int icp_iters, std::uint64_t seed) {
  const CameraRig rig = load_camera_rig(rig_path);
  const FrameSet set = load_frame_dir(frames_dir);
  const std::vector<SceneTruth> truths = load_truth_sidecars(set.paths);
  const std::vector<CameraRig> rigs = load_rig_sidecars(set.paths, rig);

  BaselineOptions options;
  options.method = method == "icp" ? BaselineMethod::Icp : BaselineMethod::Ransac;
  options.ransac_threshold_mm = ransac_threshold;
  options.ransac_iterations = ransac_iters;
  options.icp_max_iters = icp_iters;
  options.icp_perturb_init = icp_init == "perturbed";
  options.perturb_deg = perturb_deg;
  options.perturb_mm = perturb_mm;
  options.tracker = tracker_cfg;
  options.seed = seed;

  const auto rows = evaluate_baselines(set.frames, truths, rigs, options);

  const fs::path out_path = out_csv;
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_baseline_csv(rows, out_path);

  ManifestBuilder manifest(
      "baseline",
      {"baseline", "--method", method, "--rig", abs_str(rig_path), "--frames",
       abs_str(frames_dir), "--ransac-threshold", format_double(ransac_threshold),
       "--ransac-iters", std::to_string(ransac_iters), "--icp-init", icp_init, "--perturb-deg",
       format_double(perturb_deg), "--perturb-mm", format_double(perturb_mm), "--icp-iters",
       std::to_string(icp_iters), "--seed", std::to_string(seed), "--out", out_csv});
  manifest.input(rig_path);
  for (const auto& p : set.paths) manifest.input(p);
  manifest.doc["seed"] = seed;
  manifest.doc["config"] = {{"method", method},
                            {"ransac_threshold_mm", ransac_threshold},
                            {"ransac_iterations", ransac_iters},
                            {"icp_init", icp_init},
                            {"icp_max_iters", icp_iters}};
  for (const auto& r : rows) manifest.tally(r.status);
  manifest.output(out_path);
  manifest.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));

  std::cout << "baseline: " << rows.size() << " rows in " << out_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marker-less planar-target tracking toolkit for depth images"};
  app.require_subcommand(1);

  // --- synth ---
  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "render synthetic depth frames with truth");
  synth_cmd->add_option("--scene", synth.scene_path, "scene spec JSON")->required();
  synth_cmd->add_option("--rig", synth.rig_path, "camera rig JSON")->required();
  synth_cmd->add_option("--frames", synth.frames, "frame count")
      ->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--noise", synth.noise_path, "noise spec JSON");
  synth_cmd->add_option("--sigma", synth.sigma, "Gaussian sigma, mm");
  synth_cmd->add_option("--boundary-scale", synth.boundary_scale, "sigma multiplier near edges");
  synth_cmd->add_option("--dropout", synth.dropout, "dropout probability");
  synth_cmd->add_option("--seed", synth.seed, "master seed");
  synth_cmd->add_option("--trajectory", synth.trajectory, "orbit | static")
      ->check(CLI::IsMember({"orbit", "static"}));
  synth_cmd->add_option("--dist-min", synth.dist_min, "min camera distance, mm");
  synth_cmd->add_option("--dist-max", synth.dist_max, "max camera distance, mm");
  synth_cmd->add_option("--azimuth-max", synth.azimuth_max, "max azimuth, deg");
  synth_cmd->add_option("--elevation-max", synth.elevation_max, "max elevation, deg");
  synth_cmd->add_option("--gaze-drop", synth.gaze_drop, "gaze point below plane center, mm");
  synth_cmd->add_option("--threads", synth.threads, "render threads");

  // --- track ---
  std::string track_rig, track_frames, track_out, track_config;
  int track_threads = 1;
  TrackerConfig track_flags;
  CLI::App* track_cmd = app.add_subcommand("track", "track the planar target per frame");
  track_cmd->add_option("--rig", track_rig, "camera rig JSON")->required();
  track_cmd->add_option("--frames", track_frames, "frame directory")->required();
  track_cmd->add_option("--out", track_out, "results CSV")->required();
  track_cmd->add_option("--threads", track_threads, "worker threads (1 keeps latency clean)");
  add_tracker_flags(track_cmd, track_flags, track_config);

  // --- sweep ---
  std::string sweep_rig, sweep_frames, sweep_out, sweep_config, sweep_sizes;
  TrackerConfig sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "patch-size sweep over a frame set");
  sweep_cmd->add_option("--rig", sweep_rig, "camera rig JSON")->required();
  sweep_cmd->add_option("--frames", sweep_frames, "frame directory with truth sidecars")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "sweep CSV")->required();
  sweep_cmd->add_option("--sizes", sweep_sizes, "comma-separated odd sizes (default 1..13)");
  add_tracker_flags(sweep_cmd, sweep_flags, sweep_config);

  // --- randerr ---
  std::string rand_frames, rand_mask, rand_out;
  CLI::App* rand_cmd = app.add_subcommand("randerr", "per-pixel depth repeatability report");
  rand_cmd->add_option("--frames", rand_frames, "static frame series directory")->required();
  rand_cmd->add_option("--mask", rand_mask, "region-of-interest mask PGM")->required();
  rand_cmd->add_option("--out", rand_out, "report CSV")->required();

  // --- baseline ---
  std::string base_rig, base_frames, base_out, base_method, base_config;
  std::string base_icp_init = "truth";
  double base_ransac_threshold = 5.0, base_perturb_deg = 5.0, base_perturb_mm = 20.0;
  int base_ransac_iters = 200, base_icp_iters = 50;
  std::uint64_t base_seed = 0;
  TrackerConfig base_flags;
  CLI::App* base_cmd = app.add_subcommand("baseline", "ICP / RANSAC comparison on a frame set");
  base_cmd->add_option("--method", base_method, "icp | ransac")
      ->required()
      ->check(CLI::IsMember({"icp", "ransac"}));
  base_cmd->add_option("--rig", base_rig, "camera rig JSON")->required();
  base_cmd->add_option("--frames", base_frames, "frame directory with truth sidecars")->required();
  base_cmd->add_option("--out", base_out, "comparison CSV")->required();
  base_cmd->add_option("--ransac-threshold", base_ransac_threshold, "inlier threshold, mm");
  base_cmd->add_option("--ransac-iters", base_ransac_iters, "RANSAC rounds");
  base_cmd->add_option("--icp-init", base_icp_init, "truth | perturbed")
      ->check(CLI::IsMember({"truth", "perturbed"}));
  base_cmd->add_option("--perturb-deg", base_perturb_deg, "init rotation perturbation, deg");
  base_cmd->add_option("--perturb-mm", base_perturb_mm, "init translation perturbation, mm");
  base_cmd->add_option("--icp-iters", base_icp_iters, "ICP max iterations");
  base_cmd->add_option("--seed", base_seed, "master seed");
  add_tracker_flags(base_cmd, base_flags, base_config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      return run_synth(synth);
    }
    if (track_cmd->parsed()) {
      const TrackerConfig cfg = resolve_tracker_config(track_cmd, track_flags, track_config);
      return run_track(track_rig, track_frames, track_out, cfg, track_threads);
    }
    if (sweep_cmd->parsed()) {
      const TrackerConfig cfg = resolve_tracker_config(sweep_cmd, sweep_flags, sweep_config);
      std::vector<int> sizes;
      if (!sweep_sizes.empty()) {
        std::size_t pos = 0;
        while (pos < sweep_sizes.size()) {
          const std::size_t comma = sweep_sizes.find(',', pos);
          const std::string token = sweep_sizes.substr(
              pos, comma == std::string::npos ? std::string::npos : comma - pos);
          sizes.push_back(std::stoi(token));
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
      }
      return run_sweep(sweep_rig, sweep_frames, sweep_out, cfg, sizes);
    }
    if (rand_cmd->parsed()) {
      return run_randerr(rand_frames, rand_mask, rand_out);
    }
    if (base_cmd->parsed()) {
      const TrackerConfig cfg = resolve_tracker_config(base_cmd, base_flags, base_config);
      return run_baseline(base_rig, base_frames, base_out, base_method, cfg,
                          base_ransac_threshold, base_ransac_iters, base_icp_init,
                          base_perturb_deg, base_perturb_mm, base_icp_iters, base_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
