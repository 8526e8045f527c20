#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace gicflow {

// Shortest round-trip decimal form, locale independent. Negative zero is
// normalized so golden files do not depend on the sign of a vanished flow.
inline std::string format_double(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Presentation rounding: half away from zero at the given decimal count.
inline double round_to_decimals(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

inline std::string format_fixed(double v, int decimals) {
    v = round_to_decimals(v, decimals);
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

}  // namespace gicflow
