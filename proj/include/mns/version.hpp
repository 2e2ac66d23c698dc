#pragma once

namespace mns {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mns
