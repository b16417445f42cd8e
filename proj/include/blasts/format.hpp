#pragma once

#include <charconv>
#include <string>

namespace blasts {

// Locale-independent shortest round-trip decimal form ('.' separator).
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace blasts
