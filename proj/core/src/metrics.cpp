#include "planar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "planar/errors.hpp"

namespace planar {

MetricsRecord MetricsRecord::of(std::vector<double> samples) {
  if (samples.empty()) {
    throw ConfigError("MetricsRecord: need at least one sample");
  }
  MetricsRecord rec;
  double sum = 0.0;
  rec.min = std::numeric_limits<double>::infinity();
  rec.max = -std::numeric_limits<double>::infinity();
  for (double s : samples) {
    sum += s;
    rec.min = std::min(rec.min, s);
    rec.max = std::max(rec.max, s);
  }
  rec.mean = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (double s : samples) {
    const double d = s - rec.mean;
    ss += d * d;
  }
  rec.sd = std::sqrt(ss / static_cast<double>(samples.size()));
  rec.raw = std::move(samples);
  return rec;
}

MetricsRecord latency_stats(const std::vector<double>& samples_ms) {
  return MetricsRecord::of(samples_ms);
}

double population_sd(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(values.size()));
}

namespace {

template <typename Point>
CornerErrorResult aligned_corner_error(const std::array<Point, 4>& tracked,
                                       const std::array<Point, 4>& truth) {
  CornerErrorResult best;
  double best_total = std::numeric_limits<double>::infinity();
  for (int reflect = 0; reflect < 2; ++reflect) {
    for (int shift = 0; shift < 4; ++shift) {
      std::array<double, 4> d{};
      double total = 0.0;
      for (int i = 0; i < 4; ++i) {
        const int j = reflect ? (shift - i + 8) % 4 : (shift + i) % 4;
        d[static_cast<std::size_t>(i)] =
            (tracked[static_cast<std::size_t>(i)] - truth[static_cast<std::size_t>(j)]).norm();
        total += d[static_cast<std::size_t>(i)];
      }
      if (total < best_total) {
        best_total = total;
        best.distances = d;
      }
    }
  }
  best.mean = best_total / 4.0;
  return best;
}

}  // namespace

CornerErrorResult corner_error(const std::array<Eigen::Vector3d, 4>& tracked,
                               const std::array<Eigen::Vector3d, 4>& truth) {
  return aligned_corner_error(tracked, truth);
}

CornerErrorResult corner_error_px(const std::array<Eigen::Vector2d, 4>& tracked,
                                  const std::array<Eigen::Vector2d, 4>& truth) {
  return aligned_corner_error(tracked, truth);
}

double dice_counts(std::size_t intersection, std::size_t size_a, std::size_t size_b) {
  if (size_a + size_b == 0) return 1.0;
  return 2.0 * static_cast<double>(intersection) / static_cast<double>(size_a + size_b);
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ConfigError("dice: mask dimensions differ");
  }
  std::size_t inter = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool ba = a.bits[i] != 0;
    const bool bb = b.bits[i] != 0;
    inter += (ba && bb) ? 1 : 0;
    na += ba ? 1 : 0;
    nb += bb ? 1 : 0;
  }
  return dice_counts(inter, na, nb);
}

void DepthSeries::validate() const {
  if (frames.size() < 2) {
    throw ConfigError("DepthSeries: need at least 2 frames");
  }
  for (const auto& f : frames) {
    if (f.width() != frames[0].width() || f.height() != frames[0].height()) {
      throw ConfigError("DepthSeries: frame dimensions differ");
    }
  }
  if (mask.width != frames[0].width() || mask.height != frames[0].height()) {
    throw ConfigError("DepthSeries: mask dimensions differ from frames");
  }
  if (mask.count() == 0) {
    throw ConfigError("DepthSeries: mask is empty");
  }
}

RandomErrorResult random_error(const DepthSeries& series) {
  series.validate();

  const int w = series.frames[0].width();
  const int h = series.frames[0].height();
  const double n = static_cast<double>(series.frames.size());

  RandomErrorResult result;
  result.width = w;
  result.height = h;
  result.map.assign(static_cast<std::size_t>(w) * h, 0.0);

  std::vector<double> masked;
  masked.reserve(series.mask.count());
  for (std::size_t i = 0; i < result.map.size(); ++i) {
    if (!series.mask.bits[i]) continue;
    double mean = 0.0;
    for (const auto& f : series.frames) mean += f.depths()[i];
    mean /= n;
    double ss = 0.0;
    for (const auto& f : series.frames) {
      const double d = static_cast<double>(f.depths()[i]) - mean;
      ss += d * d;
    }
    const double err = std::sqrt(ss / n);
    result.map[i] = err;
    masked.push_back(err);
  }

  const MetricsRecord agg = MetricsRecord::of(std::move(masked));
  result.mean = agg.mean;
  result.sd = agg.sd;
  result.min = agg.min;
  result.max = agg.max;
  return result;
}

}  // namespace planar
