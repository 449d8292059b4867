#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace hyperspin {

// `value` formatted to `digits` significant digits (printf %g rules).
inline std::string sig_digits(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

// Shortest decimal form that parses back to exactly `value`.
inline std::string round_trip(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

}  // namespace hyperspin
