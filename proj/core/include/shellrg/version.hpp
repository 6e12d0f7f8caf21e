#pragma once

namespace shellrg {

inline constexpr const char* kVersion = "0.1.0";

} // namespace shellrg
