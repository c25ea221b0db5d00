#pragma once

namespace reflectlab {
inline constexpr const char* version = "0.1.0";
}
