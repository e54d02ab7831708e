#pragma once

namespace fclab {

inline constexpr const char* version_string = "fclab 1.0.0";

} // namespace fclab
