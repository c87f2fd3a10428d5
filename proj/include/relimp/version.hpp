#pragma once

namespace relimp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace relimp
