#pragma once

namespace hypmap {
inline constexpr const char* kVersion = "0.1.0";
}
