#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace pshave {

/// Shortest decimal representation that round-trips to the same double.
/// Always uses '.' as radix and never groups thousands.
inline std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

/// Fixed-precision rendering for human-readable tables.
inline std::string format_fixed(double value, int digits) {
    if (!std::isfinite(value)) return format_number(value);
    if (value == 0.0) value = 0.0;
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

}  // namespace pshave
