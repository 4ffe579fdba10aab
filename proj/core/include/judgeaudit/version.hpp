#pragma once

namespace judgeaudit {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace judgeaudit
