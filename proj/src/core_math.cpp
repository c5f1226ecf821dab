#include "sabr_ldp/core_math.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "detail/root_finding.hpp"
#include "detail/special.hpp"
#include "sabr_ldp/errors.hpp"

namespace sabr_ldp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 200;

[[noreturn]] void fail(const char* what, double arg, double residual) {
    throw SolverError(std::string(what) + ": no convergence for argument " + std::to_string(arg) +
                      " (residual " + std::to_string(residual) + ")");
}

// Root of sin(l)/l = r with the complement 1 - r supplied separately.
SolveResult sinc_root(double r, double one_minus_r) {
    SolveResult out;
    if (one_minus_r == 0.0) return out;
    if (r >= 0.5) {
        auto f = [&](double l) {
            return std::pair{detail::one_minus_sinc(l) - one_minus_r, detail::d_one_minus_sinc(l)};
        };
        auto res = detail::newton_increasing(f, 0.0, 2.0, std::sqrt(6.0 * one_minus_r), 2.0 * kEps,
                                             kMaxIter);
        out.root = res.x;
        out.residual = std::fabs(res.fx);
        out.iterations = res.iterations;
    } else {
        // work with e = pi - l, where sin(e) carries full relative precision
        auto f = [&](double e) { return std::pair{std::sin(e) - r * (kPi - e), std::cos(e) + r}; };
        auto res = detail::newton_increasing(f, 0.0, 1.25, kPi * r / (1.0 + r), kEps * 1e-3,
                                             kMaxIter);
        out.root = kPi - res.x;
        out.residual = std::fabs(std::sin(res.x) / out.root - r);
        out.iterations = res.iterations;
    }
    if (!(out.residual <= kResidualTol)) fail("solve_sinc", r, out.residual);
    return out;
}

// d = pi - y1, computed directly when small.
struct HwAngle {
    double d = 0.0;
    double y1 = kPi;
    SolveResult solve;
};

HwAngle hw_angle(double rho) {
    HwAngle out;
    if (rho <= 2.0) {
        out.solve = sinc_root(1.0 / rho, (rho - 1.0) / rho);
        out.d = out.solve.root;
        out.y1 = kPi - out.d;
        out.solve.root = out.y1;
        out.solve.residual = std::fabs(rho * std::sin(out.d) - out.d);
    } else {
        auto f = [&](double y) {
            return std::pair{y + rho * std::sin(y) - kPi, 1.0 + rho * std::cos(y)};
        };
        auto res = detail::newton_increasing(f, 0.0, std::acos(-1.0 / rho), kPi / (1.0 + rho),
                                             kEps, kMaxIter);
        out.y1 = res.x;
        out.d = kPi - res.x;
        out.solve = {res.x, std::fabs(res.fx), res.iterations};
    }
    if (!(out.solve.residual <= kResidualTol)) fail("solve_hw_y1", rho, out.solve.residual);
    return out;
}

}  // namespace

double sinhc(double x) {
    double ax = std::fabs(x);
    if (ax < 1e-4) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

double sinc(double x) {
    if (std::fabs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

SolveResult solve_sinhc_log(double log_c) {
    if (!(log_c >= 0.0) || !std::isfinite(log_c))
        throw DomainError("solve_sinhc: argument must satisfy c >= 1");
    SolveResult out;
    if (log_c == 0.0) return out;
    auto f = [&](double x) { return std::pair{detail::log_sinhc(x) - log_c, detail::d_log_sinhc(x)}; };
    double hi = std::max(50.0, log_c + std::log(2.0 * (log_c + 1.0)) + 5.0);
    double seed = log_c < 1.5 ? std::sqrt(6.0 * log_c) : log_c + std::log(2.0 * (log_c + 1.0));
    auto res = detail::newton_increasing(f, 0.0, hi, seed, 2.0 * kEps * std::max(1.0, log_c),
                                         kMaxIter);
    out.root = res.x;
    out.residual = std::fabs(std::expm1(res.fx));
    out.iterations = res.iterations;
    if (!(out.residual <= kResidualTol)) fail("solve_sinhc", log_c, out.residual);
    return out;
}

SolveResult solve_sinhc(double c) {
    if (!(c >= 1.0) || !std::isfinite(c)) throw DomainError("solve_sinhc: requires c >= 1");
    return solve_sinhc_log(std::log1p(c - 1.0));
}

SolveResult solve_sinc(double r) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("solve_sinc: requires 0 < r <= 1");
    return sinc_root(r, 1.0 - r);
}

SolveResult solve_sinc2(double x) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("solve_sinc2: requires 0 < x <= 1");
    SolveResult out = sinc_root(x, 1.0 - x);
    out.root *= 0.5;
    return out;
}

SolveResult solve_case_i(double r) {
    if (!(r > 1.0) || !std::isfinite(r)) throw DomainError("solve_case_i: requires r > 1");
    SolveResult out = solve_sinhc(r);
    out.root *= 2.0;
    return out;
}

SolveResult solve_hw_x1(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("solve_hw_x1: requires 0 < rho < 1");
    return solve_sinhc_log(-std::log(rho));
}

SolveResult solve_hw_y1(double rho) {
    if (!(rho > 1.0) || !std::isfinite(rho)) throw DomainError("solve_hw_y1: requires rho > 1");
    return hw_angle(rho).solve;
}

HwLog hartman_watson_log(double s) {
    if (!std::isfinite(s)) throw DomainError("hartman_watson_log: non-finite argument");
    HwLog out;
    if (s == 0.0) return out;
    if (s < 0.0) {
        double x = solve_sinhc_log(-s).root;
        double x2 = x * x;
        double q, x2_over_q;
        if (x < 0.1) {
            // x coth x - 1 = x^2 (1/3 - x^2/45 + ...)
            double qn = 1.0 / 3 + x2 * (-1.0 / 45 + x2 * (2.0 / 945 - x2 / 4725));
            q = x2 * qn;
            x2_over_q = 1.0 / qn;
            out.shifted = x2 * (1.0 / 6 + x2 * (1.0 / 45 + x2 * (-2.0 / 945 + x2 / 4725)));
        } else {
            q = x / std::tanh(x) - 1.0;
            x2_over_q = x2 / q;
            out.shifted = 0.5 * x2 - q;
        }
        out.d1 = -1.0 - q;
        out.d2 = x2_over_q - 1.0 - q;
        return out;
    }
    double rho = std::exp(s);
    double d, dcotd;
    if (rho <= 2.0) {
        // 1 - 1/rho = -expm1(-s) keeps the small complement exact
        d = sinc_root(std::exp(-s), -std::expm1(-s)).root;
        dcotd = d / std::tan(d);
    } else {
        HwAngle ang = hw_angle(rho);
        d = ang.d;
        dcotd = -d * std::cos(ang.y1) / std::sin(ang.y1);
    }
    double d2 = d * d;
    double p, d2_over_p;
    if (d < 0.1) {
        // 1 - d cot d = d^2 (1/3 + d^2/45 + ...)
        double pn = 1.0 / 3 + d2 * (1.0 / 45 + d2 * (2.0 / 945 + d2 / 4725));
        p = d2 * pn;
        d2_over_p = 1.0 / pn;
        out.shifted = d2 * (-1.0 / 6 + d2 * (1.0 / 45 + d2 * (2.0 / 945 + d2 / 4725)));
    } else {
        p = 1.0 - dcotd;
        d2_over_p = d2 / p;
        out.shifted = -0.5 * d2 + p;
    }
    out.d1 = -1.0 + p;
    out.d2 = d2_over_p - 1.0 + p;
    return out;
}

double hartman_watson_F(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("hartman_watson_F: requires rho > 0");
    return kPi * kPi / 2.0 - 1.0 + hartman_watson_log(std::log(rho)).shifted;
}

double hartman_watson_F_series(double rho) {
    double h = rho - 1.0;
    return kPi * kPi / 2.0 - 1.0 - h + 1.5 * h * h - 1.2 * h * h * h;
}

}  // namespace sabr_ldp
