#pragma once

#include <charconv>
#include <string>

namespace pdmpstop {

// Shortest decimal that round-trips the double; CSV number format.
inline std::string format_shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace pdmpstop
