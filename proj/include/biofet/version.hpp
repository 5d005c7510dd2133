#pragma once

namespace biofet {

inline constexpr const char* version = "0.1.0";

} // namespace biofet
