#pragma once

namespace adiaq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace adiaq
