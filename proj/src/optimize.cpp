#include "detail/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "sabr_ldp/errors.hpp"

namespace sabr_ldp::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGradTol = 1e-11;
constexpr double kGradAccept = 1e-9;
constexpr double kBox = 40.0;

Eval2D safe_eval(const Objective2D& obj, double e, double h) {
    Eval2D out;
    out.f = kInf;
    if (!(std::fabs(e) <= kBox && std::fabs(h) <= kBox)) return out;
    try {
        out = evaluate(obj, e, h);
    } catch (const std::exception&) {
        out.f = kInf;
    }
    if (!std::isfinite(out.f)) out.f = kInf;
    return out;
}

double grad_norm(const Eval2D& ev) { return std::max(std::fabs(ev.g[0]), std::fabs(ev.g[1])); }

Min2D newton(const Objective2D& obj, Point2D start) {
    Min2D out;
    double e = start.e, h = start.h;
    Eval2D ev = safe_eval(obj, e, h);
    out.e = e;
    out.h = h;
    out.f = ev.f;
    out.gradNorm = kInf;
    if (!std::isfinite(ev.f)) return out;
    double gn = grad_norm(ev);
    int it = 0;
    for (; it < 100 && gn > kGradTol; ++it) {
        double a = ev.H[0], b = ev.H[1], c = ev.H[2];
        double tr = a + c;
        double disc = std::hypot(a - c, 2.0 * b);
        double lmin = 0.5 * (tr - disc), lmax = 0.5 * (tr + disc);
        double delta = 1e-8 * std::max(1.0, std::fabs(lmax));
        if (lmin < delta) {
            a += delta - lmin;
            c += delta - lmin;
        }
        double det = a * c - b * b;
        double p0 = -(c * ev.g[0] - b * ev.g[1]) / det;
        double p1 = -(a * ev.g[1] - b * ev.g[0]) / det;
        double len = std::max(std::fabs(p0), std::fabs(p1));
        if (len > 2.0) {
            p0 *= 2.0 / len;
            p1 *= 2.0 / len;
        }
        double slope = ev.g[0] * p0 + ev.g[1] * p1;
        bool accepted = false;
        for (double t = 1.0; t >= 1e-12; t *= 0.5) {
            Eval2D trial = safe_eval(obj, e + t * p0, h + t * p1);
            if (!std::isfinite(trial.f)) continue;
            double tgn = grad_norm(trial);
            bool armijo = trial.f <= ev.f + 1e-4 * t * slope;
            // at the noise floor of f, accept steps that reduce the gradient
            bool flat = trial.f <= ev.f + 1e-14 * (1.0 + std::fabs(ev.f)) && tgn < gn;
            if (armijo || flat) {
                e += t * p0;
                h += t * p1;
                ev = trial;
                gn = tgn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    out.e = e;
    out.h = h;
    out.f = ev.f;
    out.gradNorm = gn;
    out.iterations = it;
    out.converged = gn <= kGradAccept;
    return out;
}

Point2D nelder_mead(const Objective2D& obj, Point2D start) {
    struct V {
        double e, h, f;
    };
    auto fval = [&](double e, double h) { return safe_eval(obj, e, h).f; };
    std::array<V, 3> s{V{start.e, start.h, 0.0}, V{start.e + 0.25, start.h, 0.0},
                       V{start.e, start.h + 0.25, 0.0}};
    for (auto& v : s) v.f = fval(v.e, v.h);
    for (int it = 0; it < 4000; ++it) {
        std::sort(s.begin(), s.end(), [](const V& x, const V& y) { return x.f < y.f; });
        double size = std::max(std::fabs(s[2].e - s[0].e), std::fabs(s[2].h - s[0].h));
        if (std::isfinite(s[2].f) && s[2].f - s[0].f <= 1e-15 * (1.0 + std::fabs(s[0].f)) &&
            size < 1e-9)
            break;
        double ce = 0.5 * (s[0].e + s[1].e), ch = 0.5 * (s[0].h + s[1].h);
        V r{2.0 * ce - s[2].e, 2.0 * ch - s[2].h, 0.0};
        r.f = fval(r.e, r.h);
        if (r.f < s[0].f) {
            V x{3.0 * ce - 2.0 * s[2].e, 3.0 * ch - 2.0 * s[2].h, 0.0};
            x.f = fval(x.e, x.h);
            s[2] = x.f < r.f ? x : r;
        } else if (r.f < s[1].f) {
            s[2] = r;
        } else {
            V k{0.5 * (ce + s[2].e), 0.5 * (ch + s[2].h), 0.0};
            k.f = fval(k.e, k.h);
            if (k.f < s[2].f) {
                s[2] = k;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].e = 0.5 * (s[0].e + s[i].e);
                    s[i].h = 0.5 * (s[0].h + s[i].h);
                    s[i].f = fval(s[i].e, s[i].h);
                }
            }
        }
    }
    auto best = std::min_element(s.begin(), s.end(), [](const V& x, const V& y) { return x.f < y.f; });
    return {best->e, best->h};
}

Min2D solve_from(const Objective2D& obj, Point2D seed) {
    Min2D r = newton(obj, seed);
    if (r.converged) return r;
    Point2D p = nelder_mead(obj, seed);
    Min2D polished = newton(obj, p);
    return polished.converged || !(r.f <= polished.f) ? polished : r;
}

bool better(const Min2D& a, const Min2D& b) {
    if (a.converged != b.converged) return a.converged;
    return a.f < b.f;
}

}  // namespace

Eval2D evaluate(const Objective2D& obj, double e, double h) {
    Eval2D out;
    RateILog r;
    if (obj.model == RateModel::Exact) {
        r = rate_I_log(e, h);
    } else {
        r.value = 12.0 * e * e - 24.0 * e * h + 16.0 * h * h;
        r.de = 24.0 * e - 24.0 * h;
        r.dh = -24.0 * e + 32.0 * h;
        r.dee = 24.0;
        r.deh = -24.0;
        r.dhh = 32.0;
    }
    const double u = std::exp(e), v = std::exp(h);
    out.f = 0.5 * r.value + obj.lu * u + obj.lv * (v - 1.0);
    out.g[0] = 0.5 * r.de + obj.lu * u;
    out.g[1] = 0.5 * r.dh + obj.lv * v;
    out.H[0] = 0.5 * r.dee + obj.lu * u;
    out.H[1] = 0.5 * r.deh;
    out.H[2] = 0.5 * r.dhh + obj.lv * v;
    if (obj.w != 0.0) {
        const double w = obj.w, c1 = obj.c1, c2 = obj.c2;
        const double Q = obj.c0 + c1 * u + c2 * (v - 1.0);
        out.f += w * Q * Q / u;
        out.g[0] += w * (2.0 * Q * c1 - Q * Q / u);
        out.g[1] += 2.0 * w * Q * c2 * v / u;
        out.H[0] += w * (2.0 * c1 * c1 * u - 2.0 * Q * c1 + Q * Q / u);
        out.H[1] += w * (2.0 * c1 * c2 * v - 2.0 * Q * c2 * v / u);
        out.H[2] += 2.0 * w * c2 * v * (c2 * v + Q) / u;
    }
    return out;
}

Point2D quadratic_seed(double W, double d, double c1, double c2, double l1, double l2) {
    double a = 12.0 + 2.0 * W * c1 * c1 + l1;
    double b = -12.0 + 2.0 * W * c1 * c2;
    double c = 16.0 + 2.0 * W * c2 * c2 + l2;
    double r0 = -(2.0 * W * c1 * d + l1);
    double r1 = -(2.0 * W * c2 * d + l2);
    double det = a * c - b * b;
    Point2D p{(c * r0 - b * r1) / det, (a * r1 - b * r0) / det};
    if (!std::isfinite(p.e) || !std::isfinite(p.h)) return {};
    p.e = std::clamp(p.e, -5.0, 5.0);
    p.h = std::clamp(p.h, -5.0, 5.0);
    return p;
}

Min2D minimize(const Objective2D& obj, std::span<const Point2D> seeds, const char* what) {
    Min2D best;
    best.f = kInf;
    bool have = false;
    for (const Point2D& s : seeds) {
        Min2D r = solve_from(obj, s);
        if (!have || better(r, best)) {
            best = r;
            have = true;
        }
    }
    if (best.converged) {
        // a lower value on a coarse grid means Newton found the wrong basin
        Point2D lowest{best.e, best.h};
        double flow = best.f;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                double f = safe_eval(obj, best.e + 0.5 * i, best.h + 0.5 * j).f;
                if (f < flow) {
                    flow = f;
                    lowest = {best.e + 0.5 * i, best.h + 0.5 * j};
                }
            }
        if (flow < best.f - 1e-10 * (1.0 + std::fabs(best.f))) {
            Min2D r = solve_from(obj, lowest);
            if (better(r, best)) best = r;
        }
    }
    if (!best.converged) {
        std::ostringstream msg;
        msg << what << ": minimization did not converge (f=" << best.f << ", |grad|=" << best.gradNorm
            << ", log u=" << best.e << ", log v=" << best.h << ")";
        throw SolverError(msg.str());
    }
    return best;
}

}  // namespace sabr_ldp::detail
