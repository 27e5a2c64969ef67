#pragma once

namespace shiftest {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace shiftest
