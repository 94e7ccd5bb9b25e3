#pragma once

namespace nr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nr
