#pragma once

namespace rdsbench {

inline constexpr const char* kToolName = "rdsbench";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace rdsbench
