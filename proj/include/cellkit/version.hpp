#pragma once

#include <string_view>

namespace cellkit {

inline constexpr std::string_view kToolName = "cellkit";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace cellkit
