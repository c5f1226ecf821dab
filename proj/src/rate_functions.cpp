#include "sabr_ldp/rate_functions.hpp"

#include <cmath>
#include <numbers>

#include "detail/root_finding.hpp"
#include "detail/special.hpp"
#include "sabr_ldp/core_math.hpp"
#include "sabr_ldp/errors.hpp"

namespace sabr_ldp {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

ScalingParams ScalingParams::from_model(double sigma0, double omega, double corr, double maturity,
                                        std::int64_t n) {
    require_positive(sigma0, "sigma0");
    require_positive(omega, "omega");
    require_positive(maturity, "maturity");
    if (n < 1) throw DomainError("n must be at least 1");
    double tau = maturity / static_cast<double>(n);
    double nn = static_cast<double>(n);
    double beta = 0.5 * omega * omega * tau * nn * nn;
    return from_beta_rho(beta, sigma0 * std::sqrt(tau), corr, n, tau);
}

ScalingParams ScalingParams::from_beta_rho(double beta, double rho, double corr, std::int64_t n,
                                           double tau) {
    require_positive(beta, "beta");
    require_positive(rho, "rho");
    if (!(corr >= -1.0 && corr <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
    ScalingParams sp;
    sp.beta = beta;
    sp.rho = rho;
    sp.a = 4.0 * beta * rho * rho;
    sp.v0 = rho / std::sqrt(2.0 * beta);
    sp.corr = corr;
    sp.corrPerp = std::sqrt((1.0 - corr) * (1.0 + corr));
    sp.n = n;
    sp.tau = tau;
    return sp;
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::CaseI: return "CaseI";
        case Branch::CaseII: return "CaseII";
        case Branch::Diagonal: return "Diagonal";
        case Branch::Uncorrelated1: return "Uncorrelated1";
        case Branch::Uncorrelated2: return "Uncorrelated2";
        case Branch::Boundary: return "Boundary";
    }
    return "Unknown";
}

double rate_I(double u, double v) {
    require_positive(u, "rate_I: u");
    require_positive(v, "rate_I: v");
    if (u == v) return 4.0 * (u - 1.0) * (u - 1.0) / u;
    if (u > v) {
        double phi = solve_case_i(u / v).root;
        double p = std::exp(0.5 * phi);
        double ratio = phi == 0.0 ? 1.0 : phi / std::expm1(phi);
        return phi * phi + 4.0 * ratio * (v * p - 1.0) * (v - p) / v;
    }
    double lam = solve_sinc(u / v).root;
    double c = v * std::cos(lam) - 1.0;
    return 4.0 * lam * lam * (u - 1.0) + 4.0 * c * c / u;
}

RateILog rate_I_log(double e, double h) {
    if (!std::isfinite(e) || !std::isfinite(h)) throw DomainError("rate_I_log: non-finite argument");
    HwLog G = hartman_watson_log(h - e);
    const double E1 = std::expm1(-e);
    const double E2 = std::expm1(2.0 * h - e);
    const double x1 = 1.0 + E1, x2 = 1.0 + E2;
    const double gp1 = G.d1 + 1.0;
    RateILog r;
    r.value = 8.0 * G.shifted + 4.0 * E1 + 4.0 * E2;
    r.de = -8.0 * gp1 - 4.0 * E1 - 4.0 * E2;
    r.dh = 8.0 * gp1 + 8.0 * E2;
    r.dee = 8.0 * G.d2 + 4.0 * x1 + 4.0 * x2;
    r.deh = -8.0 * G.d2 - 8.0 * x2;
    r.dhh = 8.0 * G.d2 + 16.0 * x2;
    return r;
}

double rate_I_via_F(double u, double v) {
    require_positive(u, "rate_I_via_F: u");
    require_positive(v, "rate_I_via_F: v");
    return rate_I_log(std::log(u), std::log(v)).value;
}

double rate_I_quartic(double u, double v, bool quadratic_only) {
    const double e = std::log(u), h = std::log(v);
    double q = 12.0 * e * e - 24.0 * e * h + 16.0 * h * h;
    if (quadratic_only) return q;
    double e2 = e * e, h2 = h * h;
    q += (-12.0 * e2 * e + 36.0 * e2 * h - 56.0 * e * h2 + 32.0 * h2 * h) / 5.0;
    q += (109.0 * e2 * e2 - 436.0 * e2 * e * h + 1004.0 * e2 * h2 - 1136.0 * e * h2 * h) / 175.0 +
         1552.0 / 525.0 * h2 * h2;
    return q;
}

double rate_J_BS(double x) {
    require_positive(x, "rate_J_BS: x");
    if (x == 1.0) return 0.0;
    if (x > 1.0) {
        double xi = solve_sinhc(x).root;
        return xi * detail::x_minus_tanh(0.5 * xi);
    }
    double lam = solve_sinc2(x).root;
    return 2.0 * lam * detail::tan_minus_x(lam);
}

double rate_J_BS_prime(double x) {
    require_positive(x, "rate_J_BS_prime: x");
    if (x == 1.0) return 0.0;
    if (x > 1.0) {
        double xi = solve_sinhc(x).root;
        double ch = std::cosh(0.5 * xi);
        return 0.5 * xi * xi / (ch * ch);
    }
    double lam = solve_sinc2(x).root;
    double c = std::cos(lam);
    return -2.0 * lam * lam / (c * c);
}

RateEval rate_J_X_uncorr(double y, double a) {
    require_positive(a, "rate_J_X_uncorr: a");
    if (!std::isfinite(y)) throw DomainError("rate_J_X_uncorr: y must be finite");
    RateEval out;
    if (y == -0.5 || y == 0.5) {
        out.value = y > 0.0 ? a : 0.0;
        out.branch = Branch::Boundary;
        return out;
    }
    const double ay = std::fabs(y);
    if (ay > 0.5) {
        // (2/a) sinh^2(xi/2) + sinhc^2(xi)/4 = y^2, solved in log form
        const double log_y2 = 2.0 * std::log(ay);
        const double log_2a = std::log(2.0 / a);
        auto f = [&](double xi) {
            double la = log_2a + 2.0 * detail::log_sinh(0.5 * xi);
            double lb = -2.0 * std::numbers::ln2 + 2.0 * detail::log_sinhc(xi);
            double mx = std::max(la, lb);
            double lse = mx + std::log(std::exp(la - mx) + std::exp(lb - mx));
            double wa = std::exp(la - lse), wb = std::exp(lb - lse);
            return std::pair{lse - log_y2, wa / std::tanh(0.5 * xi) + 2.0 * wb * detail::d_log_sinhc(xi)};
        };
        double hi = std::min(solve_sinhc(2.0 * ay).root, 2.0 * std::asinh(ay * std::sqrt(0.5 * a)));
        hi = hi * (1.0 + 1e-12) + 1e-300;
        auto res = detail::newton_increasing(f, 0.0, hi, 0.9 * hi, 4e-16 * std::max(1.0, log_y2), 200);
        double resid = std::fabs(std::expm1(res.fx));
        if (!(resid <= kResidualTol)) throw SolverError("rate_J_X_uncorr: xi equation did not converge");
        const double xi = res.x;
        const double u = sinhc(xi);
        const double sh = std::sinh(0.5 * xi);
        // y + u/2, rewritten for y < 0 through the defining equation
        const double s = y > 0.0 ? y + 0.5 * u : -(2.0 / a) * sh * sh / (ay + 0.5 * u);
        out.value = xi * detail::x_minus_tanh(0.5 * xi) + a * s * s / u;
        out.uStar = u;
        out.vStar = std::cosh(0.5 * xi);
        out.branch = Branch::Uncorrelated1;
        out.solverVar = xi;
        return out;
    }
    // (2/a) sin^2(lam) + y^2 - sinc^2(2 lam)/4 = 0 on (0, pi/2)
    const double y2m = (ay - 0.5) * (ay + 0.5);
    auto g = [&](double lam) {
        double om = detail::one_minus_sinc(2.0 * lam);
        double sn = std::sin(lam);
        double val = y2m + (2.0 / a) * sn * sn + 0.25 * om * (2.0 - om);
        double der = (2.0 / a) * std::sin(2.0 * lam) + (1.0 - om) * detail::d_one_minus_sinc(2.0 * lam);
        return std::pair{val, der};
    };
    double seed = std::min(std::sqrt(-0.5 * a * y2m), 1.0);
    auto res = detail::newton_increasing(g, 0.0, 0.5 * std::numbers::pi, seed, 1e-17, 200);
    if (!(std::fabs(res.fx) <= kResidualTol))
        throw SolverError("rate_J_X_uncorr: lambda equation did not converge");
    const double lam = res.x;
    const double u = 1.0 - detail::one_minus_sinc(2.0 * lam);
    const double sn = std::sin(lam);
    const double s = y >= 0.0 ? y + 0.5 * u : (2.0 / a) * sn * sn / (0.5 * u + ay);
    out.value = 2.0 * lam * detail::tan_minus_x(lam) + a * s * s / u;
    out.uStar = u;
    out.vStar = std::cos(lam);
    out.branch = Branch::Uncorrelated2;
    out.solverVar = lam;
    return out;
}

double rate_J_X_quadratic_coeff(double a, double corr) {
    return 6.0 * a / (6.0 + a - 3.0 * std::sqrt(2.0 * a) * corr);
}

double rate_J_X_large_x(double x, double a) {
    if (!(x >= 10.0)) throw DomainError("rate_J_X_large_x: requires x >= 10");
    require_positive(a, "rate_J_X_large_x: a");
    double L = std::log(2.0 * x);
    return 2.0 * a * x + 0.5 * L * L + L * std::log(2.0 * L) - L;
}

double rate_I_X(double k, const ScalingParams& sp) {
    return rate_J_X(k / (sp.rho * sp.rho), sp.a, sp.corr).value / (8.0 * sp.beta);
}

}  // namespace sabr_ldp
