#pragma once

#include <span>

#include "sabr_ldp/rate_functions.hpp"

namespace sabr_ldp::detail {

// f(eps, eta) = I(u, v)/2 + lu u + lv (v - 1) + w (c0 + c1 u + c2 (v - 1))^2 / u
// with u = exp(eps), v = exp(eta).
struct Objective2D {
    double lu = 0.0;
    double lv = 0.0;
    double w = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    RateModel model = RateModel::Exact;
};

struct Eval2D {
    double f = 0.0;
    double g[2] = {0.0, 0.0};
    double H[3] = {0.0, 0.0, 0.0};  // ee, eh, hh
};

struct Point2D {
    double e = 0.0;
    double h = 0.0;
};

struct Min2D {
    double e = 0.0;
    double h = 0.0;
    double f = 0.0;
    double gradNorm = 0.0;
    int iterations = 0;
    bool converged = false;
};

Eval2D evaluate(const Objective2D& obj, double e, double h);

// Stationary point of the quadratic model 6e^2 - 12eh + 8h^2 + W (d + c1 e + c2 h)^2
// + l1 e + l1/2 e^2 + l2 h + l2/2 h^2.
Point2D quadratic_seed(double W, double d, double c1, double c2, double l1 = 0.0, double l2 = 0.0);

// Damped Newton from each seed, Nelder-Mead fallback, coarse grid check.
// Throws SolverError when no seed reaches a stationary point.
Min2D minimize(const Objective2D& obj, std::span<const Point2D> seeds, const char* what);

}  // namespace sabr_ldp::detail
