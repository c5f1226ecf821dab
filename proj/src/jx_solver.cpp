#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "detail/optimize.hpp"
#include "sabr_ldp/core_math.hpp"
#include "sabr_ldp/errors.hpp"
#include "sabr_ldp/rate_functions.hpp"

namespace sabr_ldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNearZero = 1e-6;

void check_corr(double corr, bool allow_positive) {
    if (!(corr >= -1.0 && corr <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
    if (corr > 0.0 && !allow_positive)
        throw DomainError("positive correlation requires the research flag");
    if (corr >= 1.0) throw DomainError("correlation 1 is not supported");
}

void check_a(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("a must be positive");
}

Branch classify(double e, double h, double& solver_var) {
    if (std::fabs(e - h) <= 1e-12) {
        solver_var = 0.0;
        return Branch::Diagonal;
    }
    double r = std::exp(e - h);
    if (r > 1.0) {
        solver_var = solve_case_i(r).root;
        return Branch::CaseI;
    }
    solver_var = solve_sinc(r).root;
    return Branch::CaseII;
}

detail::Objective2D jx_problem(double y, double a, double corr) {
    double perp2 = (1.0 - corr) * (1.0 + corr);
    detail::Objective2D obj;
    obj.w = a / perp2;
    obj.c0 = y;
    obj.c1 = 0.5;
    obj.c2 = -corr * std::sqrt(2.0 / a);
    return obj;
}

// Linearized minimizer of J_X around y = -1/2, per unit of d = y + 1/2.
detail::Point2D jx_linear_direction(double a, double corr) {
    const double c2 = -corr * std::sqrt(2.0 / a);
    if (corr == -1.0) {
        // hard constraint e/2 + c2 h = -d
        double h = -2.0 * (24.0 * c2 + 12.0) / (48.0 * c2 * c2 + 48.0 * c2 + 16.0);
        return {-2.0 - 2.0 * c2 * h, h};
    }
    double W = a / ((1.0 - corr) * (1.0 + corr));
    double a11 = 12.0 + 0.5 * W, a12 = -12.0 + W * c2, a22 = 16.0 + 2.0 * W * c2 * c2;
    double r0 = -W, r1 = -2.0 * W * c2;
    double det = a11 * a22 - a12 * a12;
    return {(a22 * r0 - a12 * r1) / det, (a11 * r1 - a12 * r0) / det};
}

RateEval finish(double value, double e, double h) {
    RateEval out;
    out.value = std::max(value, 0.0);
    out.uStar = std::exp(e);
    out.vStar = std::exp(h);
    out.branch = classify(e, h, out.solverVar);
    return out;
}

// corr = -1: the penalty becomes the constraint u = -2 (y + c2 (v - 1)).
RateEval jx_fully_correlated(double y, double a) {
    const double c2 = std::sqrt(2.0 / a);
    const double v_max = 1.0 - y / c2;
    if (!(v_max > 0.0)) {
        RateEval out;
        out.value = kInf;
        out.uStar = out.vStar = std::numeric_limits<double>::quiet_NaN();
        out.branch = Branch::Boundary;
        return out;
    }
    auto u_of = [&](double h) { return -2.0 * (y + c2 * std::expm1(h)); };
    auto phi = [&](double h) {
        double u = u_of(h);
        if (!(u > 0.0)) return kInf;
        try {
            return 0.5 * rate_I_log(std::log(u), h).value;
        } catch (const std::exception&) {
            return kInf;
        }
    };
    const double hi = std::log(v_max) + std::log1p(-1e-12);
    const double lo = hi - 30.0;
    const int m = 240;
    int best = 0;
    double fbest = kInf;
    for (int i = 0; i <= m; ++i) {
        double f = phi(lo + (hi - lo) * i / m);
        if (f < fbest) {
            fbest = f;
            best = i;
        }
    }
    if (!std::isfinite(fbest)) throw SolverError("rate_J_X: fully correlated problem has no finite value");
    double blo = lo + (hi - lo) * std::max(best - 1, 0) / m;
    double bhi = lo + (hi - lo) * std::min(best + 1, m) / m;
    auto [h, f] = boost::math::tools::brent_find_minima(phi, blo, bhi,
                                                        std::numeric_limits<double>::digits / 2);
    return finish(f, std::log(u_of(h)), h);
}

}  // namespace

ObjectiveEval jx_objective(double y, double a, double corr, double logU, double logV) {
    check_a(a);
    if (!(std::fabs(corr) < 1.0)) throw DomainError("jx_objective: requires |corr| < 1");
    detail::Eval2D ev = detail::evaluate(jx_problem(y, a, corr), logU, logV);
    return {ev.f, ev.g[0], ev.g[1]};
}

MartingalePoint martingale_min_point(double a, double corr, RateModel model, bool allowPositiveCorr) {
    check_a(a);
    check_corr(corr, allowPositiveCorr);
    if (corr == 0.0) return {};
    detail::Objective2D obj;
    obj.lu = a * corr * corr;
    obj.lv = -2.0 * corr * std::sqrt(2.0 * a);
    obj.model = model;
    std::array<detail::Point2D, 2> seeds{detail::quadratic_seed(0.0, 0.0, 0.0, 0.0, obj.lu, obj.lv),
                                         detail::Point2D{}};
    detail::Min2D m = detail::minimize(obj, seeds, "martingale_min_point");
    return {std::exp(m.e), std::exp(m.h), m.f};
}

double switch_point_yR(const MartingalePoint& p, double a, double corr) {
    return 0.5 * (1.0 - 2.0 * corr * corr) * p.uM + corr * std::sqrt(2.0 / a) * (p.vM - 1.0);
}

double switch_point_yR(double a, double corr) {
    return switch_point_yR(martingale_min_point(a, corr), a, corr);
}

JxSolver::JxSolver(double a, double corr, const JxOptions& opts) : a_(a), corr_(corr), opts_(opts) {
    check_a(a);
    check_corr(corr, opts.allowPositiveCorr);
    mp_ = martingale_min_point(a, corr, RateModel::Exact, opts.allowPositiveCorr);
    yR_ = switch_point_yR(mp_, a, corr);
}

RateEval JxSolver::operator()(double y) const {
    if (!std::isfinite(y)) throw DomainError("rate_J_X: y must be finite");
    const bool research = corr_ > 0.0;
    if (corr_ == 0.0 && !opts_.forceOptimizer) return rate_J_X_uncorr(y, a_);

    const double d = y + 0.5;
    if (std::fabs(d) < kNearZero && !research) {
        detail::Point2D dir = jx_linear_direction(a_, corr_);
        RateEval out;
        out.value = rate_J_X_quadratic_coeff(a_, corr_) * d * d;
        out.uStar = std::exp(dir.e * d);
        out.vStar = std::exp(dir.h * d);
        out.branch = Branch::Boundary;
        return out;
    }
    if (!research && std::fabs(y - yR_) <= 1e-12 * std::max(1.0, std::fabs(yR_))) {
        // lower bound J >= 2 a y is attained here
        RateEval out;
        out.value = 2.0 * a_ * y;
        out.uStar = mp_.uM;
        out.vStar = mp_.vM;
        out.branch = Branch::Boundary;
        return out;
    }
    if (corr_ == -1.0) return jx_fully_correlated(y, a_);

    detail::Objective2D obj = jx_problem(y, a_, corr_);
    std::vector<detail::Point2D> seeds;
    seeds.push_back(detail::quadratic_seed(obj.w, d, 0.5, obj.c2));
    RateEval unc = rate_J_X_uncorr(y, a_);
    seeds.push_back({std::log(unc.uStar), std::log(unc.vStar)});
    seeds.push_back({});
    detail::Min2D m = detail::minimize(obj, seeds, "rate_J_X");
    RateEval out = finish(m.f, m.e, m.h);
    out.researchMode = research;
    return out;
}

RateEval rate_J_X(double y, double a, double corr, const JxOptions& opts) {
    return JxSolver(a, corr, opts)(y);
}

}  // namespace sabr_ldp
