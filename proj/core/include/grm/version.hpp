#pragma once

namespace grm {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace grm
