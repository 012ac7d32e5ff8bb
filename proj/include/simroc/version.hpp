#pragma once

namespace simroc {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace simroc
