#pragma once

namespace ddchain {
inline constexpr const char* kVersion = "0.1.0";
}
