#pragma once

namespace numcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace numcert
