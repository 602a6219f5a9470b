#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace ac {

/// Measured left side against predicted right side of an inequality.
struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::string context;

    bool pass() const {
        return std::isfinite(lhs) && std::isfinite(rhs) && slack >= -1e-9 * std::max(1.0, rhs);
    }
};

inline BoundCheck make_check(double lhs, double rhs, std::string context) {
    return {lhs, rhs, rhs - lhs, std::move(context)};
}

}  // namespace ac
