#pragma once

namespace vaporstore {

inline constexpr const char kVersion[] = "0.1.0";

}
