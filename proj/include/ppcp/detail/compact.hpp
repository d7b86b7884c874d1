#pragma once

#include <cstdio>
#include <string>

namespace ppcp::detail {

// Shortest "%g" rendering, for labels.
inline std::string compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace ppcp::detail
