#pragma once

namespace proca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace proca
