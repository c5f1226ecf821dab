#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "sabr_ldp/errors.hpp"
#include "sabr_ldp/rate_functions.hpp"

using namespace sabr_ldp;

namespace {

// golden-section minimum of f on [lo, hi]
template <class F>
double golden_min(F f, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

struct ScenarioRow {
    double a, uM, vM, yR;
};
const ScenarioRow kScenarios[] = {
    {0.005, 0.9636, 0.9638, 0.4821},
    {0.08, 0.8664, 0.8692, 0.4362},
    {0.32, 0.7589, 0.7676, 0.3882},
    {2.0, 0.5360, 0.5636, 0.2938},
};

}  // namespace

TEST_CASE("ScalingParams") {
    ScalingParams sp = ScalingParams::from_model(0.2, 1.0, -0.5, 1.0, 100);
    CHECK(sp.tau == doctest::Approx(0.01));
    CHECK(sp.rho == doctest::Approx(0.02));
    CHECK(sp.beta == doctest::Approx(50.0));
    CHECK(sp.a == doctest::Approx(4 * sp.beta * sp.rho * sp.rho));
    CHECK(sp.a == doctest::Approx(2 * 0.04 * 1.0));
    CHECK(sp.v0 == doctest::Approx(sp.rho / std::sqrt(2 * sp.beta)));
    CHECK(sp.corrPerp * sp.corrPerp + sp.corr * sp.corr == doctest::Approx(1.0));
}

TEST_CASE("rate_I reference values") {
    CHECK(rate_I(1, 1) == 0.0);
    CHECK(rate_I(2, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rate_I(1.5, 1.0) == doctest::Approx(1.82830963234308).epsilon(1e-12));
    CHECK(rate_I(0.8, 1.2) == doctest::Approx(2.351216908487995).epsilon(1e-12));
    CHECK(rate_I_via_F(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rate_I_via_F(2, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rate_I_via_F(0.8, 1.2) == doctest::Approx(rate_I(0.8, 1.2)).epsilon(1e-10));
    CHECK_THROWS_AS(rate_I(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(rate_I(1.0, -1.0), DomainError);
}

TEST_CASE("rate_I against the bisection-root closed form") {
    for (double u : {0.1, 0.5, 0.9, 1.3, 4.0, 20.0})
        for (double v : {0.05, 0.6, 1.0, 1.7, 8.0})
            CHECK(rate_I(u, v) == doctest::Approx(oracle::rate_I(u, v)).epsilon(1e-9));
}

TEST_CASE("rate_I against the path variational oracle") {
    for (auto [u, v] : {std::pair{1.5, 1.0}, {0.8, 1.2}, {0.9, 0.5}}) {
        double o = oracle::rate_I_path(u, v);
        CHECK(std::abs(rate_I(u, v) - o) / o <= 1e-3);
    }
}

TEST_CASE("rate_I and rate_I_via_F agree on a log grid") {
    double worst = 0;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            double u = 0.2 * std::pow(25.0, i / 49.0), v = 0.2 * std::pow(25.0, j / 49.0);
            worst = std::max(worst, std::abs(rate_I(u, v) - rate_I_via_F(u, v)));
        }
    CHECK(worst <= 1e-8);
}

TEST_CASE("rate_I is continuous across the diagonal") {
    for (int i = 0; i < 100; ++i) {
        double u = 0.1 * std::pow(100.0, i / 99.0);
        double diag = 4 * (u - 1) * (u - 1) / u;
        for (double rel : {1e-10, -1e-10, 1e-12, -1e-12}) CHECK(std::abs(rate_I(u * (1 + rel), u) - diag) <= 1e-7);
        // one-sided limits agree to first order as well
        const double d = 1e-5;
        double left = rate_I(u * std::exp(-d), u), right = rate_I(u * std::exp(d), u);
        CHECK(std::abs(left + right - 2 * diag) <= 1e-7 * std::max(1.0, diag));
    }
}

TEST_CASE("rate_I projections") {
    // min over u gives 4 log^2 v, min over v gives 2 J_BS(u)
    for (double v : {0.4, 0.8, 1.0, 1.6, 3.0}) {
        double m = golden_min([v](double e) { return rate_I(std::exp(e), v); }, -8, 8);
        CHECK(m == doctest::Approx(4 * std::log(v) * std::log(v)).epsilon(1e-6).scale(1));
    }
    for (double u : {0.3, 0.7, 1.0, 1.4, 5.0}) {
        double m = golden_min([u](double h) { return rate_I(u, std::exp(h)); }, -8, 8);
        CHECK(m == doctest::Approx(2 * rate_J_BS(u)).epsilon(1e-6).scale(1));
    }
}

TEST_CASE("rate_I_quartic") {
    CHECK(rate_I_quartic(1, 1) == 0.0);
    double e = 0.01;
    CHECK(rate_I_quartic(std::exp(e), 1) ==
          doctest::Approx(12 * e * e - 12.0 / 5 * e * e * e + 109.0 / 175 * e * e * e * e).epsilon(1e-13));
    CHECK(rate_I_quartic(std::exp(e), 1, true) == doctest::Approx(12 * e * e).epsilon(1e-14));
    CHECK(std::abs(rate_I(1.1, 1.05) - rate_I_quartic(1.1, 1.05)) <= 1e-4);
    // remainder is fifth order
    double r1 = std::abs(rate_I(std::exp(0.02), std::exp(-0.01)) - rate_I_quartic(std::exp(0.02), std::exp(-0.01)));
    double r2 = std::abs(rate_I(std::exp(0.04), std::exp(-0.02)) - rate_I_quartic(std::exp(0.04), std::exp(-0.02)));
    CHECK(r2 / r1 == doctest::Approx(32.0).epsilon(0.1));
}

TEST_CASE("rate_I_log derivatives") {
    for (auto [e, h] : {std::pair{0.3, -0.2}, {-0.5, 0.4}, {0.1, 0.1}, {0.0, 0.0}, {1.5, 0.2}, {-2.0, -2.5}}) {
        RateILog r = rate_I_log(e, h);
        CHECK(r.value == doctest::Approx(rate_I(std::exp(e), std::exp(h))).epsilon(1e-10).scale(1e-12));
        const double d = 1e-5;
        auto f = [](double x, double y) { return rate_I_log(x, y).value; };
        auto near = [](double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::max(1.0, std::abs(ref)); };
        CHECK(near(r.de, (f(e + d, h) - f(e - d, h)) / (2 * d), 1e-6));
        CHECK(near(r.dh, (f(e, h + d) - f(e, h - d)) / (2 * d), 1e-6));
        auto ge = [](double x, double y) { return rate_I_log(x, y).de; };
        auto gh = [](double x, double y) { return rate_I_log(x, y).dh; };
        CHECK(near(r.dee, (ge(e + d, h) - ge(e - d, h)) / (2 * d), 1e-5));
        CHECK(near(r.deh, (ge(e, h + d) - ge(e, h - d)) / (2 * d), 1e-5));
        CHECK(near(r.dhh, (gh(e, h + d) - gh(e, h - d)) / (2 * d), 1e-5));
    }
    RateILog z = rate_I_log(0, 0);
    CHECK(z.dee == doctest::Approx(24.0));
    CHECK(z.deh == doctest::Approx(-24.0));
    CHECK(z.dhh == doctest::Approx(32.0));
}

TEST_CASE("rate_J_BS") {
    CHECK(rate_J_BS(1.0) == 0.0);
    CHECK(rate_J_BS(std::sinh(2.0) / 2) == doctest::Approx(2 - 2 * std::tanh(1.0)).epsilon(1e-13));
    CHECK(rate_J_BS(std::sinh(2.0) / 2) == doctest::Approx(0.4768116880884703).epsilon(1e-13));
    CHECK(rate_J_BS(0.5) == doctest::Approx(0.8415957901058934).epsilon(1e-13));
    CHECK(rate_J_BS_prime(std::sinh(2.0) / 2) == doctest::Approx(0.8399486832280522).epsilon(1e-13));
    CHECK(std::abs(rate_J_BS_prime(1 + 1e-9)) < 1e-6);
    CHECK(std::abs(rate_J_BS_prime(1 - 1e-9)) < 1e-6);
    CHECK_THROWS_AS(rate_J_BS(0.0), DomainError);
    for (double x : {0.05, 0.3, 0.7, 0.95, 1.05, 2.0, 10.0, 300.0}) {
        const double h = 1e-6 * std::max(1.0, x);
        double fd = (rate_J_BS(x + h) - rate_J_BS(x - h)) / (2 * h);
        CHECK(std::abs(rate_J_BS_prime(x) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("rate_J_X_uncorr") {
    for (double a : {0.01, 0.7, 5.0}) {
        CHECK(rate_J_X_uncorr(-0.5, a).value == 0.0);
        CHECK(rate_J_X_uncorr(0.5, a).value == doctest::Approx(a).epsilon(1e-14));
    }
    CHECK(rate_J_X_uncorr(0.5, 0.7).value == doctest::Approx(0.7));
    CHECK(rate_J_X_uncorr(1.3, 1.0).value == doctest::Approx(3.016002792036087).epsilon(1e-12));
    CHECK(rate_J_X_uncorr(0.8, 1.0).value == doctest::Approx(1.670078341607775).epsilon(1e-12));
    CHECK(rate_J_X_uncorr(1.3, 1.0).value == doctest::Approx(oracle::jx_grid(1.3, 1.0, 0.0)).epsilon(1e-8));
    CHECK(rate_J_X_uncorr(-1.1, 0.3).value == doctest::Approx(oracle::jx_grid(-1.1, 0.3, 0.0)).epsilon(1e-8));
    CHECK(rate_J_X_uncorr(0.1, 2.0).value == doctest::Approx(oracle::jx_grid(0.1, 2.0, 0.0)).epsilon(1e-8));
    CHECK_THROWS_AS(rate_J_X_uncorr(0.1, 0.0), DomainError);
}

TEST_CASE("symmetry at zero correlation") {
    for (double a : {0.1, 1.0, 10.0})
        for (int i = 0; i <= 60; ++i) {
            double y = -3 + 0.1 * i;
            double d = rate_J_X(y, a, 0).value - rate_J_X(-y, a, 0).value - 2 * a * y;
            CHECK(std::abs(d) <= 1e-9);
        }
}

TEST_CASE("rate_J_X with correlation") {
    CHECK(rate_J_X(-0.5, 2.0, -0.75).value == doctest::Approx(0.0).scale(1e-14));
    CHECK(rate_J_X(0.2, 0.32, -0.75).value == doctest::Approx(0.14485089304671595).epsilon(1e-10));
    CHECK(rate_J_X(0.2, 2.0, 0.0, {true, false}).value == doctest::Approx(0.9557403868273923).epsilon(1e-10));
    for (auto [y, a, c] : {std::tuple{0.2, 0.32, -0.75}, {-1.2, 1.0, -0.3}, {1.5, 0.08, -0.5}, {0.0, 5.0, -0.9},
                           {-0.3, 0.5, -0.2}, {3.0, 2.0, -0.75}})
        CHECK(rate_J_X(y, a, c).value == doctest::Approx(oracle::jx_grid(y, a, c)).epsilon(1e-8));
    CHECK_THROWS_AS(rate_J_X(0.2, 1.0, 0.3), DomainError);
    RateEval pos = rate_J_X(0.2, 1.0, 0.3, {false, true});
    CHECK(pos.researchMode);
    CHECK(pos.value >= 0.0);
}

TEST_CASE("rate_J_X at corr = -1 is the limit of corr -> -1") {
    for (double y : {-1.0, 0.0, 0.3, 1.0}) {
        double lim = rate_J_X(y, 0.5, -1.0).value;
        double near = rate_J_X(y, 0.5, -0.999999).value;
        CHECK(std::abs(lim - near) <= 1e-4 * std::max(1.0, lim));
    }
    CHECK(rate_J_X(0.2, 0.32, -1.0).value == doctest::Approx(0.1419715965).epsilon(1e-8));
}

TEST_CASE("rate_J_X: 2D optimizer at corr = 0 matches the closed form") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ydist(-2, 2), ladist(std::log(0.01), std::log(10.0));
    for (int i = 0; i < 100; ++i) {
        double y = ydist(gen), a = std::exp(ladist(gen));
        CHECK(std::abs(rate_J_X(y, a, 0, {true, false}).value - rate_J_X_uncorr(y, a).value) <= 1e-6);
    }
}

TEST_CASE("rate_J_X lower bound and first-order conditions") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ydist(-3, 3), ladist(std::log(0.005), std::log(20.0)), cdist(-0.98, 0.0);
    for (int i = 0; i < 200; ++i) {
        double y = ydist(gen), a = std::exp(ladist(gen)), c = cdist(gen);
        RateEval r = rate_J_X(y, a, c);
        CHECK(r.value >= 0.0);
        CHECK(r.value >= 2 * a * y - 1e-10 * std::max(1.0, std::abs(a * y)));
        if (r.branch == Branch::Boundary) continue;
        ObjectiveEval g = jx_objective(y, a, c, std::log(r.uStar), std::log(r.vStar));
        CHECK(g.value == doctest::Approx(r.value).epsilon(1e-10).scale(1e-12));
        CHECK(std::abs(g.dLogU) <= 1e-8 * std::max(1.0, r.value));
        CHECK(std::abs(g.dLogV) <= 1e-8 * std::max(1.0, r.value));
    }
}

TEST_CASE("nonnegativity on random inputs") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ld(std::log(0.05), std::log(20.0)), ydist(-4, 4), cdist(-1, 0);
    for (int i = 0; i < 1000; ++i) {
        double u = std::exp(ld(gen)), v = std::exp(ld(gen));
        CHECK(rate_I(u, v) >= 0.0);
        CHECK(rate_J_BS(u) >= 0.0);
        if (i % 5 == 0) CHECK(rate_J_X(ydist(gen), std::exp(ld(gen)), cdist(gen)).value >= 0.0);
    }
}

TEST_CASE("martingale point") {
    for (double a : {0.01, 1.0, 7.0}) {
        MartingalePoint p = martingale_min_point(a, 0.0);
        CHECK(p.uM == 1.0);
        CHECK(p.vM == 1.0);
        CHECK(switch_point_yR(a, 0.0) == 0.5);
    }
    for (double a : {0.005, 0.08, 0.32, 2.0, 9.0})
        for (double c : {-0.1, -0.5, -0.75, -1.0}) {
            MartingalePoint p = martingale_min_point(a, c);
            double diag = 1 / (1 - c * std::sqrt(a / 2));
            CHECK(p.uM == doctest::Approx(diag).epsilon(1e-8));
            CHECK(p.vM == doctest::Approx(diag).epsilon(1e-8));
            CHECK(std::abs(p.infimum) <= 1e-10);
        }
    CHECK_THROWS_AS(martingale_min_point(1.0, 0.2), DomainError);
}

TEST_CASE("quadratic-model martingale point reproduces the scenario reference values") {
    for (const auto& row : kScenarios) {
        MartingalePoint p = martingale_min_point(row.a, -0.75, RateModel::Quadratic);
        CHECK(std::abs(p.uM - row.uM) <= 5e-4);
        CHECK(std::abs(p.vM - row.vM) <= 5e-4);
        CHECK(std::abs(switch_point_yR(p, row.a, -0.75) - row.yR) <= 5e-4);
    }
}

TEST_CASE("J_X touches the lower bound at y_R") {
    for (const auto& row : kScenarios)
        for (double c : {-0.3, -0.75}) {
            JxSolver s(row.a, c);
            double yR = s.yR();
            CHECK(s(yR).value == doctest::Approx(2 * row.a * yR).epsilon(1e-6));
            // the boundary shortcut agrees with the optimizer next to it
            CHECK(std::abs(s(yR + 1e-7).value - 2 * row.a * (yR + 1e-7)) <= 1e-6);
            CHECK(s(yR + 1e-2).value > 2 * row.a * (yR + 1e-2));
        }
}

TEST_CASE("quadratic coefficient") {
    CHECK(rate_J_X_quadratic_coeff(6, 0) == doctest::Approx(3.0));
    CHECK(rate_J_X_quadratic_coeff(2, -1) == doctest::Approx(6.0 / 7));
    const double a = 0.1, c = -0.5, h = 1e-3;
    double second = (rate_J_X(-0.5 + h, a, c).value - 2 * rate_J_X(-0.5, a, c).value + rate_J_X(-0.5 - h, a, c).value) /
                    (h * h);
    CHECK(second / 2 == doctest::Approx(rate_J_X_quadratic_coeff(a, c)).epsilon(0.01));
}

TEST_CASE("large-x expansion") {
    double e4 = std::abs(rate_J_X_large_x(1e4, 1) - rate_J_X_uncorr(1e4, 1).value) / rate_J_X_uncorr(1e4, 1).value;
    double e6 = std::abs(rate_J_X_large_x(1e6, 1) - rate_J_X_uncorr(1e6, 1).value) / rate_J_X_uncorr(1e6, 1).value;
    CHECK(e4 <= 2e-3);
    CHECK(e6 < e4);
    CHECK(rate_J_X_large_x(1e8, 1) / 2e8 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(rate_J_X_large_x(5, 1), DomainError);
}

TEST_CASE("rate_I_X scaling") {
    ScalingParams sp = ScalingParams::from_beta_rho(0.5, 0.2, 0.0);
    CHECK(rate_I_X(0.1, sp) == doctest::Approx(0.1715698094282809).epsilon(1e-12));
    CHECK(rate_I_X(0.1, sp) == doctest::Approx(rate_J_X_uncorr(0.1 / 0.04, 4 * 0.5 * 0.04).value / 4).epsilon(1e-14));
    CHECK(rate_I_X(-0.5 * 0.04, sp) == doctest::Approx(0.0).scale(1e-14));
    for (double k : {0.01, 0.1, 0.5}) CHECK(rate_I_X(k, sp) - rate_I_X(-k, sp) == doctest::Approx(k).epsilon(1e-9));
    ScalingParams sc = ScalingParams::from_beta_rho(2.0, 0.3, -0.6);
    CHECK(rate_I_X(-0.5 * 0.09, sc) == doctest::Approx(0.0).scale(1e-14));
}

TEST_CASE("branch tags") {
    CHECK(rate_J_X_uncorr(1.0, 1.0).branch == Branch::Uncorrelated1);
    CHECK(rate_J_X_uncorr(0.0, 1.0).branch == Branch::Uncorrelated2);
    CHECK(rate_J_X_uncorr(-0.5, 1.0).branch == Branch::Boundary);
    CHECK(to_string(Branch::CaseI) == "CaseI");
}
