#pragma once

namespace costbc {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace costbc
