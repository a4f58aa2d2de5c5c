// Round-trip text formatting for doubles and small CSV helpers.

#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace lightning {

/// 17 significant digits: parsing the result recovers the double exactly.
inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_output(const std::string& path, bool binary = false)
{
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

inline void finish_output(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace lightning
