#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "planar/depth_frame.hpp"
#include "planar/mask.hpp"

namespace planar {

/// Aggregate statistics plus the raw per-sample values they were computed
/// from. sd is the population standard deviation.
struct MetricsRecord {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> raw;

  static MetricsRecord of(std::vector<double> samples);
};

/// mean/sd/min/max of latency samples; throws ConfigError on empty input.
MetricsRecord latency_stats(const std::vector<double>& samples_ms);

/// Population standard deviation (divide by N). Building block for the
/// repeatability metric below.
double population_sd(const std::vector<double>& values);

struct CornerErrorResult {
  std::array<double, 4> distances{};  // per tracked corner, mm (or px in 2D)
  double mean = 0.0;
};

/// Euclidean corner distances after cyclic alignment: the tracked ordering is
/// rotated/reflected over the 8 quad symmetries to minimize total distance,
/// since synthetic truth corners carry no labels.
CornerErrorResult corner_error(const std::array<Eigen::Vector3d, 4>& tracked,
                               const std::array<Eigen::Vector3d, 4>& truth);
CornerErrorResult corner_error_px(const std::array<Eigen::Vector2d, 4>& tracked,
                                  const std::array<Eigen::Vector2d, 4>& truth);

/// Set overlap 2|A n B| / (|A| + |B|). Empty-vs-empty is 1 by convention,
/// empty-vs-nonempty is 0.
double dice(const BinaryMask& a, const BinaryMask& b);
double dice_counts(std::size_t intersection, std::size_t size_a, std::size_t size_b);

/// Fixed-camera frame series for the depth-repeatability experiment.
struct DepthSeries {
  std::vector<DepthFrame> frames;  // >= 2, identical dimensions
  BinaryMask mask;                 // region of interest

  void validate() const;
};

struct RandomErrorResult {
  std::vector<double> map;  // per-pixel sd, mm; 0 outside the mask
  int width = 0;
  int height = 0;
  double mean = 0.0;  // aggregates over masked pixels
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per-pixel population standard deviation of depth across the series,
/// aggregated over the mask.
RandomErrorResult random_error(const DepthSeries& series);

}  // namespace planar
