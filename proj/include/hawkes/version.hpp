#pragma once

namespace hawkes {

inline constexpr const char kVersion[] = "0.1.0";

}  // namespace hawkes
