#pragma once

namespace fairaudit {

inline constexpr char kToolName[] = "fairaudit";
inline constexpr char kToolVersion[] = "0.1.0";

}  // namespace fairaudit
