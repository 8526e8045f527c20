#pragma once

namespace gicflow {

inline constexpr const char* kToolName = "gicflow";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace gicflow
