#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "detail/root_finding.hpp"
#include "sabr_ldp/core_math.hpp"
#include "sabr_ldp/errors.hpp"

namespace sabr_ldp {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

namespace {

void check_quote(double F, double K, double s) {
    if (!(F > 0.0) || !(K > 0.0) || !std::isfinite(F) || !std::isfinite(K))
        throw DomainError("bs_price: forward and strike must be positive");
    if (!(s >= 0.0)) throw DomainError("bs_price: total stdev must be nonnegative");
}

// Price of the out-of-the-money option: call when K >= F, otherwise put.
double otm_price(double F, double K, double s) {
    if (s == 0.0) return 0.0;
    double d1 = std::log(F / K) / s + 0.5 * s;
    double d2 = d1 - s;
    if (K >= F) return F * norm_cdf(d1) - K * norm_cdf(d2);
    return K * norm_cdf(-d2) - F * norm_cdf(-d1);
}

}  // namespace

double bs_price(const BsQuote& q) {
    check_quote(q.forward, q.strike, q.totalStdev);
    const double F = q.forward, K = q.strike, s = q.totalStdev;
    if (s == 0.0) return q.isCall ? std::max(F - K, 0.0) : std::max(K - F, 0.0);
    double d1 = std::log(F / K) / s + 0.5 * s;
    double d2 = d1 - s;
    if (q.isCall) return std::max(F * norm_cdf(d1) - K * norm_cdf(d2), 0.0);
    return std::max(K * norm_cdf(-d2) - F * norm_cdf(-d1), 0.0);
}

double bs_covered_call(double F, double K, double s) {
    check_quote(F, K, s);
    if (s == 0.0) return std::min(F, K);
    double d1 = std::log(F / K) / s + 0.5 * s;
    double d2 = d1 - s;
    return F * norm_cdf(-d1) + K * norm_cdf(d2);
}

double bs_vega(double F, double K, double s) {
    check_quote(F, K, s);
    if (s == 0.0) return F == K ? F * norm_pdf(0.0) : 0.0;
    double d1 = std::log(F / K) / s + 0.5 * s;
    return F * norm_pdf(d1);
}

namespace {

// Solve for s given the OTM time value o and its complement m - o, m = min(F, K).
// Uses whichever side is smaller, in log form.
double invert_time_value(double F, double K, double o, double complement) {
    const bool use_otm = o <= complement;
    const double log_target = std::log(use_otm ? o : complement);
    auto f = [&](double s) {
        double vega = bs_vega(F, K, s);
        if (use_otm) {
            double v = otm_price(F, K, s);
            return std::pair{std::log(v) - log_target, vega / v};
        }
        double v = bs_covered_call(F, K, s);
        return std::pair{log_target - std::log(v), vega / v};
    };
    double hi = 1.0;
    while (f(hi).first < 0.0) {
        hi *= 2.0;
        if (hi > 1e4) throw ArbitrageError("bs_implied_totalstdev: price too close to its upper bound");
    }
    double seed = std::min(std::sqrt(2.0 * std::fabs(std::log(F / K))) + 0.2, 0.5 * hi);
    auto res = detail::newton_increasing(f, 0.0, hi, seed, 1e-15, 300);
    if (!(std::fabs(res.fx) <= 1e-11))
        throw SolverError("bs_implied_totalstdev: inversion did not converge");
    return res.x;
}

}  // namespace

double bs_implied_totalstdev(double price, double F, double K, bool is_call) {
    check_quote(F, K, 0.0);
    const double intrinsic = is_call ? std::max(F - K, 0.0) : std::max(K - F, 0.0);
    const double upper = is_call ? F : K;
    if (!(price >= intrinsic) || !(price < upper))
        throw ArbitrageError("bs_implied_totalstdev: price outside no-arbitrage bounds");
    double o = price - intrinsic;
    if (o == 0.0) return 0.0;
    double complement = upper - price;  // min(F, K) - o
    return invert_time_value(F, K, o, complement);
}

double bs_implied_totalstdev_covered(double covered, double F, double K) {
    check_quote(F, K, 0.0);
    const double m = std::min(F, K);
    if (!(covered > 0.0) || !(covered <= m))
        throw ArbitrageError("bs_implied_totalstdev_covered: value outside (0, min(F, K)]");
    if (covered == m) return 0.0;
    return invert_time_value(F, K, m - covered, covered);
}

}  // namespace sabr_ldp
