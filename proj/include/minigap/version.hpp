#pragma once

namespace minigap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace minigap
