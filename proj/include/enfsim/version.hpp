#pragma once

namespace enfsim {
inline constexpr const char* kVersion = "0.1.0";
}
