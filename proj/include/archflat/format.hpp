#pragma once

#include <cstdio>
#include <string>

namespace archflat {

/// Formats a double with 12 significant digits; negative zero prints as 0.
inline std::string fmt_num(double x)
{
    if (x == 0.0) x = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace archflat
