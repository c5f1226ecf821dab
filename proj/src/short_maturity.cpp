#include <array>
#include <cmath>
#include <limits>

#include "detail/optimize.hpp"
#include "sabr_ldp/errors.hpp"
#include "sabr_ldp/vol_surface.hpp"

namespace sabr_ldp {

namespace {

// log((sqrt(1 + 2 corr z + z^2) + z + corr) / (1 + corr)), accurate for small z
double hagan_D(double z, double corr) {
    double t = z * (2.0 * corr + z);
    double root_m1 = t / (std::sqrt(1.0 + t) + 1.0);
    return std::log1p((root_m1 + z) / (1.0 + corr));
}

double check_short_corr(double corr) {
    if (!(corr >= -1.0 && corr <= 0.0)) throw DomainError("short-maturity rate requires corr in [-1, 0]");
    return corr;
}

double fully_correlated(double zeta) {
    if (!(zeta < 1.0)) return std::numeric_limits<double>::infinity();
    double l = std::log1p(-zeta);
    return 2.0 * l * l;
}

}  // namespace

double short_maturity_rate(double zeta, double corr, ShortRateMethod method) {
    check_short_corr(corr);
    if (!std::isfinite(zeta)) throw DomainError("short_maturity_rate: zeta must be finite");
    if (zeta == 0.0) return 0.0;
    switch (method) {
        case ShortRateMethod::Series: {
            double z2 = zeta * zeta;
            return 2.0 * z2 - 2.0 * corr * z2 * zeta + (-2.0 / 3.0 + 2.5 * corr * corr) * z2 * z2;
        }
        case ShortRateMethod::Guess: {
            if (corr == -1.0) return fully_correlated(zeta);
            double D = hagan_D(zeta, corr);
            return 2.0 * D * D;
        }
        case ShortRateMethod::Optimizer: break;
    }
    if (corr == 0.0) {
        double l = std::asinh(std::fabs(zeta));
        return 2.0 * l * l;
    }
    if (corr == -1.0) return fully_correlated(zeta);
    detail::Objective2D obj;
    obj.w = 2.0 / ((1.0 - corr) * (1.0 + corr));
    obj.c0 = zeta;
    obj.c2 = -corr;
    std::array<detail::Point2D, 2> seeds{detail::quadratic_seed(obj.w, zeta, 0.0, obj.c2),
                                         detail::Point2D{}};
    return std::max(detail::minimize(obj, seeds, "short_maturity_rate").f, 0.0);
}

double short_maturity_vol(double logStrike, const ModelParams& m, ShortRateMethod method) {
    validate(m);
    check_short_corr(m.corr);
    const double zeta = m.omega / m.sigma0 * logStrike;
    if (std::fabs(zeta) < 1e-7) return m.sigma0 * (1.0 + 0.5 * m.corr * zeta);
    const double J = short_maturity_rate(zeta, m.corr, method);
    return m.sigma0 * std::sqrt(2.0) * std::fabs(zeta) / std::sqrt(J);
}

double hagan_vol(double logStrike, const ModelParams& m) {
    validate(m);
    if (!(std::fabs(m.corr) < 1.0)) throw DomainError("hagan_vol: requires |corr| < 1");
    const double r = m.corr;
    const double zeta = m.omega / m.sigma0 * logStrike;
    double ratio = std::fabs(zeta) < 1e-8 ? 1.0 + 0.5 * r * zeta : zeta / hagan_D(zeta, r);
    double factor =
        1.0 + (0.25 * r * m.omega * m.sigma0 + (2.0 - 3.0 * r * r) * m.omega * m.omega / 24.0) * m.maturity;
    return m.sigma0 * ratio * factor;
}

}  // namespace sabr_ldp
