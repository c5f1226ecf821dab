#pragma once

#include <cmath>
#include <limits>

namespace sabr_ldp::detail {

struct Bracketed {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Safeguarded Newton on [lo, hi] for an increasing function.  `f` returns
// {value, derivative}.  Bisects when the Newton step leaves the bracket or
// fails to halve the previous step.
template <class Fn>
Bracketed newton_increasing(Fn&& f, double lo, double hi, double x0, double ftol,
                            int max_iter = 300) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    Bracketed out;
    double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
    out.x = x;
    out.fx = std::numeric_limits<double>::infinity();
    double dx_old = hi - lo;
    for (int it = 1; it <= max_iter; ++it) {
        auto [fx, dfx] = f(x);
        out.iterations = it;
        if (std::fabs(fx) < std::fabs(out.fx)) {
            out.fx = fx;
            out.x = x;
        }
        if (fx == 0.0 || std::fabs(fx) <= ftol) break;
        if (fx > 0.0)
            hi = x;
        else
            lo = x;
        double step = fx / dfx;
        double next = x - step;
        if (!std::isfinite(next) || !(dfx > 0.0) || next <= lo || next >= hi ||
            std::fabs(2.0 * step) > std::fabs(dx_old)) {
            next = 0.5 * (lo + hi);
        }
        dx_old = next - x;
        if (std::fabs(dx_old) <= eps * std::fabs(x) || next == x) {
            if (next != x) {
                auto [fn, dn] = f(next);
                (void)dn;
                if (std::fabs(fn) < std::fabs(out.fx)) {
                    out.fx = fn;
                    out.x = next;
                }
            }
            break;
        }
        x = next;
    }
    out.converged = std::fabs(out.fx) <= ftol;
    return out;
}

}  // namespace sabr_ldp::detail
