#include "planar/depth_io.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "planar/errors.hpp"

namespace planar {

namespace {

// Skips PGM whitespace and '#' comment lines.
void skip_separators(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const char* field) {
  skip_separators(in);
  long value = 0;
  if (!(in >> value)) {
    throw PgmError(PgmError::Kind::MalformedHeader, std::string("PGM: missing or non-numeric ") + field);
  }
  return value;
}

}  // namespace

DepthFrame load_depth_frame(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PgmError(PgmError::Kind::IoFailure, "PGM: cannot open " + path.string());
  }

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw PgmError(PgmError::Kind::MalformedHeader, "PGM: not a P5 file: " + path.string());
  }

  const long width = read_header_int(in, "width");
  const long height = read_header_int(in, "height");
  const long maxval = read_header_int(in, "maxval");
  if (width <= 0 || height <= 0) {
    throw PgmError(PgmError::Kind::MalformedHeader, "PGM: non-positive dimensions in " + path.string());
  }
  if (maxval != 65535) {
    throw PgmError(PgmError::Kind::UnsupportedBitDepth,
                   "PGM: maxval " + std::to_string(maxval) + " unsupported, depth frames are 16-bit");
  }
  // Exactly one whitespace byte separates header and payload.
  if (in.get() == std::char_traits<char>::eof()) {
    throw PgmError(PgmError::Kind::TruncatedPayload, "PGM: missing payload in " + path.string());
  }

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<unsigned char> raw(count * 2);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw PgmError(PgmError::Kind::TruncatedPayload,
                   "PGM: payload truncated in " + path.string() + " (got " +
                       std::to_string(in.gcount()) + " of " + std::to_string(raw.size()) + " bytes)");
  }

  std::vector<std::uint16_t> depths(count);
  for (std::size_t i = 0; i < count; ++i) {
    depths[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  }
  return DepthFrame(static_cast<int>(width), static_cast<int>(height), std::move(depths));
}

void save_depth_frame(const DepthFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw PgmError(PgmError::Kind::IoFailure, "PGM: cannot open for write " + path.string());
  }
  out << "P5\n" << frame.width() << " " << frame.height() << "\n65535\n";
  std::vector<unsigned char> raw;
  raw.reserve(frame.depths().size() * 2);
  for (std::uint16_t d : frame.depths()) {
    raw.push_back(static_cast<unsigned char>(d >> 8));
    raw.push_back(static_cast<unsigned char>(d & 0xff));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) {
    throw PgmError(PgmError::Kind::IoFailure, "PGM: write failed for " + path.string());
  }
}

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw RigError(RigError::Kind::MissingField, std::string("rig: missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

CameraRig load_camera_rig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw RigError(RigError::Kind::IoFailure, "rig: cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw RigError(RigError::Kind::BadValue, "rig: parse error in " + path.string() + ": " + e.what());
  }

  CameraRig rig;
  rig.width = static_cast<int>(require_number(j, "width"));
  rig.height = static_cast<int>(require_number(j, "height"));
  rig.fx = require_number(j, "fx");
  rig.fy = require_number(j, "fy");
  rig.cx = require_number(j, "cx");
  rig.cy = require_number(j, "cy");
  rig.k1 = j.contains("k1") ? j["k1"].get<double>() : 0.0;
  rig.k2 = j.contains("k2") ? j["k2"].get<double>() : 0.0;

  if (!j.contains("cam_to_world") || !j["cam_to_world"].is_array() || j["cam_to_world"].size() != 16) {
    throw RigError(RigError::Kind::MissingField, "rig: cam_to_world must be an array of 16 reals");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m(r, c) = j["cam_to_world"][static_cast<std::size_t>(4 * r + c)].get<double>();
    }
  }

  if (rig.width <= 0 || rig.height <= 0 || !(rig.fx > 0.0) || !(rig.fy > 0.0)) {
    throw RigError(RigError::Kind::BadValue, "rig: width/height/fx/fy must be positive");
  }
  const Eigen::Matrix3d r = m.topLeftCorner<3, 3>();
  if (orthonormality_error(r) > 1e-6 || r.determinant() <= 0.0) {
    throw RigError(RigError::Kind::NonRigid, "rig: cam_to_world rotation block is not rigid (tolerance 1e-6)");
  }
  // Accepted within 1e-6, then snapped so downstream math sees an exact rotation.
  m.topLeftCorner<3, 3>() = nearest_rotation(r);
  m.row(3) = Eigen::RowVector4d(0, 0, 0, 1);
  rig.cam_to_world = m;
  rig.validate();
  return rig;
}

void save_camera_rig(const CameraRig& rig, const std::filesystem::path& path) {
  nlohmann::json j;
  j["width"] = rig.width;
  j["height"] = rig.height;
  j["fx"] = rig.fx;
  j["fy"] = rig.fy;
  j["cx"] = rig.cx;
  j["cy"] = rig.cy;
  j["k1"] = rig.k1;
  j["k2"] = rig.k2;
  std::vector<double> m(16);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m[static_cast<std::size_t>(4 * r + c)] = rig.cam_to_world(r, c);
    }
  }
  j["cam_to_world"] = m;
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw RigError(RigError::Kind::IoFailure, "rig: cannot open for write " + path.string());
  }
  out << j.dump(2) << "\n";
}

}  // namespace planar
