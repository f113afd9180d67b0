#pragma once

namespace rmflab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rmflab
