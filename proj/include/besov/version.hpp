#pragma once

#define BESOV_VERSION "0.1.0"

namespace besov {
inline constexpr const char* kVersion = BESOV_VERSION;
}
