// version.hpp

#pragma once

#include <string_view>

namespace fluxusc {

inline constexpr std::string_view version = "0.1.0";

} // namespace fluxusc
