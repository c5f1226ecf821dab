#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

long double sinhc_l(long double x) { return x == 0 ? 1.0L : std::sinh(x) / x; }
long double sinc_l(long double x) { return x == 0 ? 1.0L : std::sin(x) / x; }

// E(x) = (e^x - 1)/x and its derivative
double E(double x) { return std::abs(x) < 1e-4 ? 1 + x / 2 + x * x / 6 : std::expm1(x) / x; }
double dE(double x) {
    if (std::abs(x) < 1e-4) return 0.5 + x / 3 + x * x / 8;
    return (x * std::exp(x) - std::expm1(x)) / (x * x);
}

// T y = b with T = tridiag(-1, 2, -1)
std::vector<double> solve_laplacian(const std::vector<double>& b) {
    const std::size_t m = b.size();
    std::vector<double> c(m), d(m), y(m);
    c[0] = -0.5;
    d[0] = b[0] / 2;
    for (std::size_t i = 1; i < m; ++i) {
        double den = 2 + c[i - 1];
        c[i] = -1 / den;
        d[i] = (b[i] + d[i - 1]) / den;
    }
    y[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
    return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct Path {
    int n;
    double L;
    std::vector<double> h;  // interior nodes 1..n-1

    double node(int k) const { return k == 0 ? 0.0 : (k == n ? L : h[static_cast<std::size_t>(k - 1)]); }

    double Q() const {
        double s = 0;
        for (int k = 0; k < n; ++k) {
            double d = node(k + 1) - node(k);
            s += d * d;
        }
        return 4.0 * n * s;
    }
    double C() const {
        double s = 0;
        for (int k = 0; k < n; ++k) s += std::exp(2 * node(k)) * E(2 * (node(k + 1) - node(k)));
        return s / n;
    }
    std::vector<double> gradQ() const {
        std::vector<double> g(h.size());
        for (int k = 1; k < n; ++k) g[static_cast<std::size_t>(k - 1)] = 8.0 * n * (2 * node(k) - node(k - 1) - node(k + 1));
        return g;
    }
    std::vector<double> gradC() const {
        std::vector<double> g(h.size());
        for (int k = 1; k < n; ++k) {
            double a0 = node(k - 1), a1 = node(k), a2 = node(k + 1);
            double left = 2 * std::exp(2 * a0) * dE(2 * (a1 - a0));
            double right = 2 * std::exp(2 * a1) * (E(2 * (a2 - a1)) - dE(2 * (a2 - a1)));
            g[static_cast<std::size_t>(k - 1)] = (left + right) / n;
        }
        return g;
    }
};

// move along dir until C = target
bool restore(Path& p, const std::vector<double>& dir, double target) {
    for (int it = 0; it < 60; ++it) {
        double r = p.C() - target;
        if (std::abs(r) <= 1e-14 * std::max(1.0, target)) return true;
        double slope = dot(p.gradC(), dir);
        if (slope == 0) return false;
        double s = -r / slope;
        for (auto i = 0u; i < p.h.size(); ++i) p.h[i] += s * dir[i];
    }
    return std::abs(p.C() - target) <= 1e-12 * std::max(1.0, target);
}

}  // namespace

long double bisect(const std::function<long double(long double)>& f, long double lo, long double hi) {
    long double flo = f(lo);
    if (flo == 0) return lo;
    for (int i = 0; i < 200; ++i) {
        long double mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        long double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

double sinhc_root(double c) {
    if (c == 1.0) return 0.0;
    long double hi = 1;
    while (sinhc_l(hi) < c) hi *= 2;
    return double(bisect([c](long double x) { return sinhc_l(x) - c; }, 0, hi));
}

double sinc_root(double r) {
    if (r == 1.0) return 0.0;
    return double(bisect([r](long double x) { return sinc_l(x) - r; }, 0, kPi));
}

double sinc2_root(double r) { return sinc_root(r) / 2; }

double case_i_root(double r) { return 2 * sinhc_root(r); }

double hw_x1(double rho) { return sinhc_root(1 / rho); }

double hw_y1(double rho) {
    return double(bisect([rho](long double y) { return y + rho * std::sin(y) - kPi; }, 0, kPi));
}

double hw_F(double rho) {
    if (rho < 1) {
        long double x = hw_x1(rho);
        return double(x * x / 2 - rho * std::cosh(x) + kPi * kPi / 2);
    }
    if (rho == 1) return double(kPi * kPi / 2 - 1);
    long double y = hw_y1(rho);
    return double(-y * y / 2 + rho * std::cos(y) + kPi * y);
}

double rate_I(double u, double v) {
    if (u == v) return 4 * (u - 1) * (u - 1) / u;
    if (u > v) {
        double phi = case_i_root(u / v);
        double p = std::exp(phi / 2);
        return phi * phi + 4 * (phi / std::expm1(phi)) * (v * p - 1) * (v - p) / v;
    }
    double lam = sinc_root(u / v);
    double c = v * std::cos(lam) - 1;
    return 4 * lam * lam * (u - 1) + 4 * c * c / u;
}

double rate_I_path(double u, double v, int segments) {
    Path p{segments, std::log(v), std::vector<double>(static_cast<std::size_t>(segments - 1))};
    // feasible start: h = L z + s z (1 - z)
    auto set = [&](double s) {
        for (int k = 1; k < segments; ++k) {
            double z = double(k) / segments;
            p.h[static_cast<std::size_t>(k - 1)] = p.L * z + s * z * (1 - z);
        }
    };
    double lo = -1, hi = 1;
    for (set(lo); p.C() > u; set(lo)) lo *= 2;
    for (set(hi); p.C() < u; set(hi)) hi *= 2;
    double s = double(bisect(
        [&](long double x) {
            set(double(x));
            return (long double)(p.C() - u);
        },
        lo, hi));
    set(s);
    restore(p, p.gradC(), u);

    const double scale = 8.0 * segments;
    double theta = 1.0;
    double q = p.Q();
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> gQ = p.gradQ(), gC = p.gradC();
        std::vector<double> pQ = solve_laplacian(gQ), pC = solve_laplacian(gC);
        double mu = dot(gC, pQ) / dot(gC, pC);
        std::vector<double> d(pQ.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (pQ[i] - mu * pC[i]) / scale;
        double norm = 0;
        for (double x : d) norm = std::max(norm, std::abs(x));
        if (norm < 1e-13) break;
        Path trial = p;
        for (;;) {
            trial = p;
            for (std::size_t i = 0; i < d.size(); ++i) trial.h[i] -= theta * d[i];
            if (restore(trial, pC, u) && trial.Q() <= q) break;
            theta /= 2;
            if (theta < 1e-12) return q;
        }
        p = trial;
        q = p.Q();
        theta = std::min(1.0, theta * 2);
    }
    return q;
}

double jx_grid(double y, double a, double corr) {
    if (!(std::abs(corr) < 1)) throw std::domain_error("jx_grid: |corr| < 1");
    const double w = a / (1 - corr * corr);
    const double c2 = -corr * std::sqrt(2 / a);
    auto f = [&](double e, double h) {
        double u = std::exp(e), v = std::exp(h);
        double pen = y + u / 2 + c2 * (v - 1);
        return rate_I(u, v) / 2 + w * pen * pen / u;
    };
    double be = 0, bh = 0, bf = std::numeric_limits<double>::infinity();
    for (double e = -6; e <= 4; e += 0.05)
        for (double h = -4; h <= 3; h += 0.05) {
            double val = f(e, h);
            if (val < bf) {
                bf = val;
                be = e;
                bh = h;
            }
        }
    for (double step = 0.05; step > 1e-11;) {
        bool moved = false;
        const double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
        for (const auto& d : dirs) {
            double val = f(be + step * d[0], bh + step * d[1]);
            if (val < bf) {
                bf = val;
                be += step * d[0];
                bh += step * d[1];
                moved = true;
            }
        }
        if (!moved) step /= 2;
    }
    return bf;
}

double bs_call_quadrature(double forward, double strike, double total_stdev) {
    // payoff is smooth above the exercise point
    const int m = 40000;
    const double lo = std::max(-12.0, (std::log(strike / forward) + total_stdev * total_stdev / 2) / total_stdev);
    const double hi = std::max(lo, 0.0) + 12, dz = (hi - lo) / m;
    double s = 0;
    for (int i = 0; i <= m; ++i) {
        double z = lo + i * dz;
        double st = forward * std::exp(total_stdev * z - total_stdev * total_stdev / 2);
        double val = std::max(st - strike, 0.0) * std::exp(-z * z / 2);
        double wgt = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
        s += wgt * val;
    }
    return s * dz / 3 / std::sqrt(2 * M_PI);
}

}  // namespace oracle
