#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sabr_ldp/core_math.hpp"
#include "sabr_ldp/philox.hpp"
#include "sabr_ldp/rate_functions.hpp"
#include "sabr_ldp/vol_surface.hpp"

namespace sabr_ldp {

struct PathState {
    double vSum = 0.0;           // V_n = tau * sum_{i<n} sigma_i^2
    double sigmaEnd = 0.0;       // sigma_n
    double logSigmaDrift = 0.0;  // (alpha - omega^2/2) T
    double sigmaSum = 0.0;       // tau * sum_{i<n} sigma_i
};

struct McEstimate {
    double mean = 0.0;
    double stdError = 0.0;
    std::int64_t nPaths = 0;
    std::uint64_t seed = 0;
};

struct SchemeConfig {
    ModelParams model;
    std::int64_t nSteps = 250;
    double volDrift = 0.0;       // alpha: sigma_i = sigma0 exp(omega Z_i + (alpha - omega^2/2) t_i)
    bool researchMode = false;   // permits corr > 0

    double tau() const { return model.maturity / static_cast<double>(nSteps); }
};

inline constexpr std::int64_t kDefaultPaths = 100000;
inline constexpr std::int64_t kDefaultSteps = 250;

/// Throws DomainError for invalid parameters, omega = 0 with corr != 0, or corr > 0
/// outside research mode.
void validate(const SchemeConfig& cfg);

PathState simulate_vol_path(const SchemeConfig& cfg, NormalStream& rng);

/// One draw of log S_n: the volatility path followed by one more normal.
double simulate_logS(const SchemeConfig& cfg, NormalStream& rng);

/// Average of Black prices conditional on the volatility path.
McEstimate conditional_price(const SchemeConfig& cfg, double strike, bool isCall, std::int64_t nPaths,
                             std::uint64_t seed);

/// Plain payoff average over simulated S_n, same streams as conditional_price.
McEstimate naive_price(const SchemeConfig& cfg, double strike, bool isCall, std::int64_t nPaths,
                       std::uint64_t seed);

/// E[S_n] / S0 through the conditional forward.
McEstimate martingale_defect(const SchemeConfig& cfg, std::int64_t nPaths, std::uint64_t seed);

/// log S_n for every path, in path order.
std::vector<double> sample_log_spot(const SchemeConfig& cfg, std::int64_t nPaths, std::uint64_t seed);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;
    double meanStdError = 0.0;
    double varianceStdError = 0.0;
    std::int64_t n = 0;
};
SampleMoments sample_moments(std::span<const double> xs);

/// -rho^2/2 * (exp(2 alpha T) - 1) / (2 alpha T), the almost sure limit of (1/n) log S_n.
double almost_sure_limit(const SchemeConfig& cfg);
/// E[(1/n) log S_n] at finite n.
double exact_mean_log_spot_rate(const SchemeConfig& cfg);

enum class McPriceKind { Call, Put, CoveredCall };
std::string to_string(McPriceKind k);

struct McSmilePoint {
    double logStrike = 0.0;
    double impliedVol = 0.0;
    double volLow = 0.0;   // from the price bumped by -1 standard error
    double volHigh = 0.0;  // from the price bumped by +1 standard error
    McPriceKind kind = McPriceKind::Call;
    McEstimate price;      // estimate of the inverted quantity
    bool ok = true;
    std::string error;
};

/// Implied volatilities from conditional prices, inverting whichever of the OTM call,
/// OTM put or covered call is smallest. Failures are flagged per strike.
std::vector<McSmilePoint> mc_smile(const SchemeConfig& cfg, std::span<const double> logStrikes,
                                   std::int64_t nPaths, std::uint64_t seed);

/// Hull-White vol-of-vol xi corresponds to omega = xi / 2.
double hull_white_map(double xi);

enum class Regime { FiniteMaturity, SmallMaturity, LargeMaturity };
std::string to_string(Regime r);

struct RegimeInfo {
    ScalingParams scaling;
    Regime regime = Regime::FiniteMaturity;
    double distance = 0.0;  // squared distance of the scaling exponents to the chosen pattern
};

/// Labels which n -> infinity regime the inputs approximate by comparing the exponents
/// log(omega)/log(n), log(sigma0)/log(n), log(T)/log(n) with (-1/2, 1/2, 0),
/// (0, 1, -1) and (-1, 0, 1).
RegimeInfo classify_regime(const SchemeConfig& cfg);

/// sigma0 = s0 sqrt(n), omega = w0 / sqrt(n): (beta, rho, a) stay fixed as n grows.
ModelParams finite_maturity_scaling(double s0, double w0, double maturity, double corr, std::int64_t n);

}  // namespace sabr_ldp
