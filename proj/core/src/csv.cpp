#include "planar/csv.hpp"

#include <array>
#include <charconv>

namespace planar {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string join_csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row.push_back(',');
    row += fields[i];
  }
  row.push_back('\n');
  return row;
}

}  // namespace planar
