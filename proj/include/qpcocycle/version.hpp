#pragma once

#define QPCOCYCLE_VERSION_MAJOR 0
#define QPCOCYCLE_VERSION_MINOR 1
#define QPCOCYCLE_VERSION_PATCH 0
#define QPCOCYCLE_VERSION "0.1.0"

namespace qpc {
inline constexpr const char* version() { return QPCOCYCLE_VERSION; }
}  // namespace qpc
