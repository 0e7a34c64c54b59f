#pragma once

namespace stochnewton {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stochnewton
