#include "tissot/format.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace tissot {

std::string format_fixed(double value, int places) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    int n = std::snprintf(nullptr, 0, "%.*f", places, value);
    std::vector<char> buf(static_cast<std::size_t>(n) + 1);
    std::snprintf(buf.data(), buf.size(), "%.*f", places, value);
    std::string out(buf.data(), static_cast<std::size_t>(n));
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

}  // namespace tissot
