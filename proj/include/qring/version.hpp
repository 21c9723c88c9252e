#pragma once

namespace qring {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qring
