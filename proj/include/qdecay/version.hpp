#pragma once

namespace qdecay {
inline constexpr const char* kVersion = "0.1.0";
}
