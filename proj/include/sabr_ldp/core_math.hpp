#pragma once

#include <cstdint>

namespace sabr_ldp {

/// Root of a scalar equation plus the diagnostics callers may want to check.
/// `residual` is measured in the natural scale of each equation: relative for
/// the sinh(x)/x family, absolute for the trigonometric ones.
struct SolveResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

inline constexpr double kResidualTol = 1e-12;

// sinh(x)/x and sin(x)/x with series near zero.
double sinhc(double x);
double sinc(double x);

/// Unique xi >= 0 with sinh(xi)/xi = c, c >= 1.
SolveResult solve_sinhc(double c);
/// Same root given log(c); usable when c itself would overflow.
SolveResult solve_sinhc_log(double log_c);

/// Unique lambda in [0, pi) with sin(lambda)/lambda = r, r in (0, 1].
SolveResult solve_sinc(double r);

/// Unique lambda in [0, pi/2) with sin(2 lambda)/(2 lambda) = x, x in (0, 1].
SolveResult solve_sinc2(double x);

/// Root phi > 0 of sinh(phi/2)/(phi/2) = r, r > 1.
SolveResult solve_case_i(double r);

/// x1 > 0 with x1 / sinh(x1) = rho, rho in (0, 1).
SolveResult solve_hw_x1(double rho);

/// y1 in (0, pi) with y1 + rho sin(y1) = pi, rho > 1.
SolveResult solve_hw_y1(double rho);

/// Hartman-Watson exponent F(rho), rho > 0. Continuous at rho = 1 with F(1) = pi^2/2 - 1.
double hartman_watson_F(double rho);

/// Cubic expansion of F around rho = 1, accurate to O((rho-1)^4).
double hartman_watson_F_series(double rho);

/// G(s) = F(exp(s)) and its first two derivatives.  `shifted` holds
/// G(s) - (pi^2/2 - 1), computed without cancellation near s = 0.
struct HwLog {
    double shifted = 0.0;
    double d1 = -1.0;
    double d2 = 2.0;
};
HwLog hartman_watson_log(double s);

double norm_cdf(double x);
double norm_pdf(double x);

/// Black-Scholes quote with zero rates: forward, strike, total stdev sigma*sqrt(T).
struct BsQuote {
    double forward = 1.0;
    double strike = 1.0;
    double totalStdev = 0.0;
    bool isCall = true;
};

/// Undiscounted Black price. Returns the intrinsic value when totalStdev = 0.
double bs_price(const BsQuote& q);

/// F - C, the covered call. Decreasing in the stdev, equals min(F, K) at zero stdev.
double bs_covered_call(double forward, double strike, double total_stdev);

/// dC/ds = F phi(d1).
double bs_vega(double forward, double strike, double total_stdev);

/// Total implied stdev from an undiscounted call or put price. Throws
/// ArbitrageError when the price is outside [intrinsic, upper bound).
double bs_implied_totalstdev(double price, double forward, double strike, bool is_call);

/// Same inversion from a covered-call value F - C, which keeps full relative
/// precision when the call is worth nearly the forward.
double bs_implied_totalstdev_covered(double covered, double forward, double strike);

}  // namespace sabr_ldp
