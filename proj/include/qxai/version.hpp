#pragma once

namespace qxai {

inline constexpr const char* kVersion = "qxai 0.1.0";

}  // namespace qxai
