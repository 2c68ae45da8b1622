#pragma once

namespace cogpow {

inline constexpr const char* kVersion = "cogpow 0.1.0";

}  // namespace cogpow
