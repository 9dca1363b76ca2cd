#pragma once

namespace bernwf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bernwf
