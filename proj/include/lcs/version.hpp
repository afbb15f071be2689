#pragma once

namespace lcs {

inline constexpr const char* kToolName = "lcsverify";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace lcs
