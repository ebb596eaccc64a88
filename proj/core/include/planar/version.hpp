#pragma once

namespace planar {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace planar
