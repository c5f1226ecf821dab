#pragma once

#include <span>
#include <string>
#include <vector>

#include "sabr_ldp/rate_functions.hpp"

namespace sabr_ldp {

/// Continuous-time parameters of the log-normal SABR model.
struct ModelParams {
    double spot = 1.0;
    double sigma0 = 0.2;
    double omega = 1.0;
    double corr = 0.0;
    double maturity = 1.0;

    /// a = 2 (sigma0^2 T)(omega^2 T)
    double a() const { return 2.0 * sigma0 * sigma0 * omega * omega * maturity * maturity; }
    /// normalized strike y = x / (sigma0^2 T)
    double y_of(double logStrike) const { return logStrike / (sigma0 * sigma0 * maturity); }
};

/// Throws DomainError unless all positive fields are positive and corr is in [-1, 1].
void validate(const ModelParams& m);

enum class Region { LeftWing, Center, RightWing };
std::string to_string(Region r);

struct SurfaceValue {
    double vol = 1.0;
    Region region = Region::Center;
    RateEval rate;
};

struct SmilePoint {
    double logStrike = 0.0;
    double yNorm = 0.0;
    Region region = Region::Center;
    double impliedVol = 0.0;
    double rateValue = 0.0;
};

/// Asymptotic implied volatility in units of sigma0, as a function of the normalized strike.
SurfaceValue sigma_bs_normalized(double y, double a, double corr);
/// Same, reusing a solver built for (a, corr).
SurfaceValue sigma_bs_normalized(double y, const JxSolver& solver);

SmilePoint implied_vol(double logStrike, const ModelParams& m);

/// 1 - (1 - sqrt(c)) (y + 1/2), c = 1 / (1 + a/6 - sqrt(a/2) corr)
double sigma_bs_linear(double y, double a, double corr);

enum class ShortRateMethod { Optimizer, Guess, Series };

/// J(zeta; corr), the short-maturity rate function.
double short_maturity_rate(double zeta, double corr, ShortRateMethod method = ShortRateMethod::Optimizer);

double short_maturity_vol(double logStrike, const ModelParams& m,
                          ShortRateMethod method = ShortRateMethod::Optimizer);

/// Hagan's formula, with the ATM O(T) factor applied at every strike. Accepts corr in (-1, 1).
double hagan_vol(double logStrike, const ModelParams& m);

/// ATM implied volatility to O(T^2).
double lewis_atm_T2(const ModelParams& m);

/// ATM value of the normalized surface expanded in a.
double atm_series(double a, double corr);

/// Large-strike expansion of sigma_bs_normalized at corr = 0, x >= 10 (x is the normalized strike).
double extreme_strike_vol(double x, double a);
/// Same asymptotics written as sqrt(2x) / (sqrt(1 + r) + sqrt(r)).
double extreme_strike_vol_r(double x, double a);
/// Implied total variance sigma^2 T at large log-strike in physical units.
double extreme_strike_variance(double logStrike, const ModelParams& m);

/// One SmilePoint per strike, sorted by strike. Evaluated in parallel.
std::vector<SmilePoint> smile(const ModelParams& m, std::span<const double> logStrikes);

}  // namespace sabr_ldp
