#include "sabr_ldp/vol_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sabr_ldp/errors.hpp"
#include "sabr_ldp/parallel.hpp"

namespace sabr_ldp {

void validate(const ModelParams& m) {
    auto pos = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!pos(m.spot) || !pos(m.sigma0) || !pos(m.omega) || !pos(m.maturity))
        throw DomainError("model parameters spot, sigma0, omega and maturity must be positive");
    if (!(m.corr >= -1.0 && m.corr <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
}

namespace {

void validate_surface(const ModelParams& m) {
    validate(m);
    if (m.corr > 0.0) throw DomainError("the asymptotic surface requires corr <= 0");
}

}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::LeftWing: return "LeftWing";
        case Region::Center: return "Center";
        case Region::RightWing: return "RightWing";
    }
    return "Unknown";
}

SurfaceValue sigma_bs_normalized(double y, const JxSolver& solver) {
    SurfaceValue out;
    out.rate = solver(y);
    const double a = solver.a();
    if (y < -0.5)
        out.region = Region::LeftWing;
    else if (y <= solver.yR())
        out.region = Region::Center;
    else
        out.region = Region::RightWing;

    const double J = out.rate.value;
    if (!std::isfinite(J)) {
        out.vol = 0.0;
        return out;
    }
    // J = 2ay exactly on the boundary branch, so A vanishes there without rounding noise
    const double A = std::sqrt(std::max((J - 2.0 * a * y) / a, 0.0));
    const double B = std::sqrt(J / a);
    if (out.region == Region::Center) {
        out.vol = A + B;
    } else {
        // |A - B| through A^2 - B^2 = -2y
        out.vol = A + B > 0.0 ? 2.0 * std::fabs(y) / (A + B) : 0.0;
    }
    return out;
}

SurfaceValue sigma_bs_normalized(double y, double a, double corr) {
    return sigma_bs_normalized(y, JxSolver(a, corr));
}

SmilePoint implied_vol(double logStrike, const ModelParams& m) {
    validate_surface(m);
    JxSolver solver(m.a(), m.corr);
    SmilePoint p;
    p.logStrike = logStrike;
    p.yNorm = m.y_of(logStrike);
    SurfaceValue s = sigma_bs_normalized(p.yNorm, solver);
    p.region = s.region;
    p.impliedVol = m.sigma0 * s.vol;
    p.rateValue = s.rate.value;
    return p;
}

std::vector<SmilePoint> smile(const ModelParams& m, std::span<const double> logStrikes) {
    validate_surface(m);
    std::vector<double> xs(logStrikes.begin(), logStrikes.end());
    std::sort(xs.begin(), xs.end());
    JxSolver solver(m.a(), m.corr);
    std::vector<SmilePoint> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        SmilePoint& p = out[i];
        p.logStrike = xs[i];
        p.yNorm = m.y_of(xs[i]);
        SurfaceValue s = sigma_bs_normalized(p.yNorm, solver);
        p.region = s.region;
        p.impliedVol = m.sigma0 * s.vol;
        p.rateValue = s.rate.value;
    });
    return out;
}

double sigma_bs_linear(double y, double a, double corr) {
    double c = 1.0 / (1.0 + a / 6.0 - std::sqrt(0.5 * a) * corr);
    return 1.0 - (1.0 - std::sqrt(c)) * (y + 0.5);
}

double lewis_atm_T2(const ModelParams& m) {
    validate(m);
    const double s = m.sigma0, w = m.omega, r = m.corr, T = m.maturity;
    const double q = w / s;
    double first = s * w * T / 24.0 * (6.0 * r + q * (2.0 - 3.0 * r * r));
    double second = w * w * s * s * T * T / 1920.0 *
                    ((-80.0 + 240.0 * r * r) + q * r * (240.0 - 180.0 * r * r) +
                     q * q * (-12.0 + 60.0 * r * r - 45.0 * r * r * r * r));
    return s * (1.0 + first + second);
}

double atm_series(double a, double corr) {
    if (!(a > 0.0)) throw DomainError("atm_series: a must be positive");
    if (corr == 0.0)
        return 1.0 + a * (-1.0 / 48 + a * (43.0 / 23040 + a * (-1907.0 / 7741440 - a * 51083.0 / 7431782400)));
    return 1.0 + corr * std::sqrt(a) / (4.0 * std::sqrt(2.0)) + (-1.0 / 48 + corr * corr / 16.0) * a;
}

double extreme_strike_vol(double x, double a) {
    if (!(x >= 10.0)) throw DomainError("extreme_strike_vol: requires x >= 10");
    if (!(a > 0.0)) throw DomainError("extreme_strike_vol: a must be positive");
    const double L = std::log(2.0 * x);
    const double LL = std::log(2.0 * L);
    const double s2x = std::sqrt(2.0 * x);
    const double s2a = std::sqrt(2.0 * a);
    return s2x - L / s2a - LL / (2.0 * a) + 1.0 / s2a + L * L / (4.0 * a * s2x) +
           L * LL / (2.0 * a * s2x);
}

namespace {

double r_of(double x, double a) {
    const double L = std::log(2.0 * x);
    return (0.5 * L * L + L * std::log(2.0 * L) - L) / (2.0 * a * x);
}

}  // namespace

double extreme_strike_vol_r(double x, double a) {
    if (!(x >= 10.0)) throw DomainError("extreme_strike_vol_r: requires x >= 10");
    if (!(a > 0.0)) throw DomainError("extreme_strike_vol_r: a must be positive");
    const double r = r_of(x, a);
    return std::sqrt(2.0 * x) / (std::sqrt(1.0 + r) + std::sqrt(r));
}

double extreme_strike_variance(double logStrike, const ModelParams& m) {
    validate(m);
    const double y = m.y_of(logStrike);
    if (!(y >= 10.0)) throw DomainError("extreme_strike_variance: normalized strike must be >= 10");
    const double L = std::log(2.0 * y);
    const double w2T = m.omega * m.omega * m.maturity;
    return 2.0 * logStrike -
           std::sqrt(2.0 * logStrike / w2T) * std::sqrt(L * L + 2.0 * L * std::log(2.0 * L) - 2.0 * L);
}

}  // namespace sabr_ldp
