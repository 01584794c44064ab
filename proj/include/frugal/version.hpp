#pragma once

namespace frugal {
inline constexpr const char* kToolVersion = "0.1.0";
}
