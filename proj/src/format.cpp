// SPDX-License-Identifier: MIT
#include "riskprem/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace riskprem {

std::string format_sig(double v, int digits) {
    if (v == 0.0) return "0";  // no "-0"
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

double round_sig(double v, int digits) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, v);
    return std::strtod(buf, nullptr);
}

}  // namespace riskprem
