#pragma once

namespace hrigid {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hrigid
