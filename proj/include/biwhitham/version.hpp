#pragma once

namespace biwhitham {

inline constexpr const char* toolkit_version = "0.1.0";

}  // namespace biwhitham
