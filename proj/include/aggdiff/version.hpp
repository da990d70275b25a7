#pragma once

namespace aggdiff {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "aggdiff";

}  // namespace aggdiff
