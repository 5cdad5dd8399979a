#pragma once

namespace sideband {

inline constexpr const char* kVersion = "1.0.0";

} // namespace sideband
