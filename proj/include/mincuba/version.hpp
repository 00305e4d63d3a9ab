#pragma once

namespace mincuba {
inline constexpr const char* kVersion = "1.0.0";
}
