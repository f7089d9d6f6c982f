#pragma once

namespace comds {

inline constexpr const char* version = "0.1.0";

}
