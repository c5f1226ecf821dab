#pragma once

#include <cmath>

namespace sabr_ldp::detail {

// log(sinh(x)/x) and its derivative coth(x) - 1/x, x >= 0.
inline double log_sinhc(double x) {
    if (x < 0.1) {
        double x2 = x * x;
        return x2 * (1.0 / 6 + x2 * (-1.0 / 180 + x2 * (1.0 / 2835 - x2 / 37800)));
    }
    if (x < 20.0) return std::log(std::sinh(x) / x);
    return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}

inline double d_log_sinhc(double x) {
    if (x < 0.1) {
        double x2 = x * x;
        return x * (1.0 / 3 + x2 * (-1.0 / 45 + x2 * (2.0 / 945 - x2 / 4725)));
    }
    return 1.0 / std::tanh(x) - 1.0 / x;
}

// log(sinh(x)), x > 0
inline double log_sinh(double x) {
    if (x < 20.0) return std::log(std::sinh(x));
    return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
}

// 1 - sin(x)/x without cancellation near zero.
inline double one_minus_sinc(double x) {
    if (std::fabs(x) < 0.05) {
        double x2 = x * x;
        return x2 * (1.0 / 6 + x2 * (-1.0 / 120 + x2 * (1.0 / 5040 - x2 / 362880)));
    }
    return 1.0 - std::sin(x) / x;
}

// d/dx (1 - sin(x)/x) = (sin x - x cos x) / x^2
inline double d_one_minus_sinc(double x) {
    if (std::fabs(x) < 0.05) {
        double x2 = x * x;
        return x * (1.0 / 3 + x2 * (-1.0 / 30 + x2 * (1.0 / 840 - x2 / 45360)));
    }
    return (std::sin(x) - x * std::cos(x)) / (x * x);
}

// tan(x) - x for |x| < pi/2
inline double tan_minus_x(double x) {
    if (std::fabs(x) < 0.05) {
        double x2 = x * x;
        return x * x2 * (1.0 / 3 + x2 * (2.0 / 15 + x2 * (17.0 / 315 + x2 * 62.0 / 2835)));
    }
    return std::tan(x) - x;
}

// x - tanh(x)
inline double x_minus_tanh(double x) {
    if (std::fabs(x) < 0.05) {
        double x2 = x * x;
        return x * x2 * (1.0 / 3 + x2 * (-2.0 / 15 + x2 * (17.0 / 315 - x2 * 62.0 / 2835)));
    }
    return x - std::tanh(x);
}

}  // namespace sabr_ldp::detail
