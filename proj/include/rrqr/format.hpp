#pragma once

#include <charconv>
#include <string>

namespace rrqr {

/// 17 significant digits: enough for any double to read back bit-exactly.
inline std::string format_real(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace rrqr
