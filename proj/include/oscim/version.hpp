#pragma once

namespace oscim {
inline constexpr const char* kVersion = "0.1.0";
}
