#include "planar/errors.hpp"

namespace planar {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::EmptyFrame: return "empty-frame";
    case ErrorCode::NoTarget: return "no-target";
    case ErrorCode::SamplingFailure: return "sampling-failure";
    case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::IcpDegenerate: return "icp-degenerate";
    case ErrorCode::RansacNoPlane: return "ransac-no-plane";
  }
  return "unknown";
}

}  // namespace planar
