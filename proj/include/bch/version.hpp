#pragma once

namespace bch {
inline constexpr const char* kVersion = "0.1.0";
}
