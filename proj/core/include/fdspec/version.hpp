#pragma once

namespace fdspec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fdspec
