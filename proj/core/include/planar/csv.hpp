#pragma once

#include <string>
#include <vector>

namespace planar {

/// Shortest round-trip decimal form (std::to_chars), locale-independent and
/// stable across runs of the same binary — result files must be reproducible
/// byte for byte.
std::string format_double(double value);

std::string join_csv_row(const std::vector<std::string>& fields);

}  // namespace planar
