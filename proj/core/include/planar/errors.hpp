#pragma once

#include <stdexcept>
#include <string>

namespace planar {

/// Per-frame error taxonomy. Codes end up verbatim in result CSVs and run
/// manifests, so the string forms are part of the file format.
enum class ErrorCode {
  Ok,
  EmptyFrame,           // no nonzero pixel anywhere
  NoTarget,             // no candidate region yielded a corner group
  SamplingFailure,      // patch around a corner contained only zeros
  DegenerateGeometry,   // corners collinear/duplicate, no plane fit
  IcpDegenerate,        // correspondence covariance rank < 2
  RansacNoPlane,        // every sampled triple was collinear
};

const char* to_string(ErrorCode code);

/// Thrown by pipeline steps; track() converts these into a TrackResult status
/// so one bad frame never aborts a run.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(ErrorCode code, std::string step, const std::string& what)
      : std::runtime_error(what), code_(code), step_(std::move(step)) {}

  ErrorCode code() const { return code_; }
  const std::string& step() const { return step_; }

 private:
  ErrorCode code_;
  std::string step_;
};

/// Depth-frame file problems, one kind per distinct failure mode.
class PgmError : public std::runtime_error {
 public:
  enum class Kind { MalformedHeader, TruncatedPayload, UnsupportedBitDepth, IoFailure };

  PgmError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Camera-rig file problems.
class RigError : public std::runtime_error {
 public:
  enum class Kind { MissingField, BadValue, NonRigid, IoFailure };

  RigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Scene/noise/tracker config validation failures.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace planar
