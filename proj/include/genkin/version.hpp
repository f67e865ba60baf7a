#pragma once

namespace genkin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace genkin
