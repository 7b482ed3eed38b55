#pragma once

namespace ldslab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ldslab
