#include "sabr_ldp/mc_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sabr_ldp/errors.hpp"
#include "sabr_ldp/parallel.hpp"

namespace sabr_ldp {

namespace {

constexpr std::int64_t kBlock = 1024;

struct Welford {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    void merge(const Welford& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        double tot = n + o.n;
        double d = o.mean - mean;
        mean += d * (o.n / tot);
        m2 += o.m2 + d * d * (n * o.n / tot);
        n = tot;
    }
};

McEstimate to_estimate(const Welford& w, std::uint64_t seed) {
    McEstimate e;
    e.mean = w.mean;
    e.nPaths = static_cast<std::int64_t>(w.n);
    e.seed = seed;
    e.stdError = w.n > 1.0 ? std::sqrt(w.m2 / (w.n - 1.0) / w.n) : 0.0;
    return e;
}

// Runs fn(path, out) for each path and returns k accumulators. Blocks are reduced in
// block order, so the result does not depend on the thread schedule.
template <class Fn>
std::vector<Welford> run_paths(std::int64_t nPaths, std::size_t k, Fn&& fn) {
    if (nPaths < 1) throw DomainError("nPaths must be at least 1");
    const std::int64_t nBlocks = (nPaths + kBlock - 1) / kBlock;
    std::vector<std::vector<Welford>> partial(static_cast<std::size_t>(nBlocks),
                                              std::vector<Welford>(k));
    parallel_for(static_cast<std::size_t>(nBlocks), [&](std::size_t b) {
        std::vector<double> values(k);
        std::int64_t first = static_cast<std::int64_t>(b) * kBlock;
        std::int64_t last = std::min(first + kBlock, nPaths);
        auto& acc = partial[b];
        for (std::int64_t p = first; p < last; ++p) {
            fn(static_cast<std::uint64_t>(p), values.data());
            for (std::size_t j = 0; j < k; ++j) acc[j].add(values[j]);
        }
    });
    std::vector<Welford> total(k);
    for (const auto& blk : partial)
        for (std::size_t j = 0; j < k; ++j) total[j].merge(blk[j]);
    return total;
}

struct Conditional {
    double forward;
    double stdev;
    double logForward;
};

Conditional conditional_of(const SchemeConfig& cfg, const PathState& ps) {
    const ModelParams& m = cfg.model;
    double par = 0.0;
    if (m.omega > 0.0) par = m.corr / m.omega * (ps.sigmaEnd - m.sigma0 - cfg.volDrift * ps.sigmaSum);
    double perp = std::sqrt((1.0 - m.corr) * (1.0 + m.corr));
    double logF = std::log(m.spot) - 0.5 * m.corr * m.corr * ps.vSum + par;
    return {std::exp(logF), perp * std::sqrt(ps.vSum), logF};
}

// Black price on one path. The forward can overflow or underflow in the tails.
double path_price(const Conditional& c, double strike, bool isCall) {
    if (c.forward == 0.0) return isCall ? 0.0 : strike;
    if (!std::isfinite(c.forward)) return isCall ? std::numeric_limits<double>::infinity() : 0.0;
    return bs_price({c.forward, strike, c.stdev, isCall});
}

// S0 - C on one path: a covered call on the conditional forward plus the forward shortfall.
double path_covered(double S0, const Conditional& c, double strike) {
    if (c.forward == 0.0) return S0;
    if (!std::isfinite(c.forward)) return -std::numeric_limits<double>::infinity();
    return (S0 - c.forward) + bs_covered_call(c.forward, strike, c.stdev);
}

}  // namespace

void validate(const SchemeConfig& cfg) {
    const ModelParams& m = cfg.model;
    auto pos = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!pos(m.spot) || !pos(m.sigma0) || !pos(m.maturity))
        throw DomainError("spot, sigma0 and maturity must be positive");
    if (!(m.omega >= 0.0) || !std::isfinite(m.omega)) throw DomainError("omega must be nonnegative");
    if (!(m.corr >= -1.0 && m.corr <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
    if (m.corr > 0.0 && !cfg.researchMode)
        throw DomainError("positive correlation requires research mode");
    if (m.omega == 0.0 && m.corr != 0.0)
        throw DomainError("omega = 0 with nonzero correlation is undefined in this scheme");
    if (cfg.nSteps < 1) throw DomainError("nSteps must be at least 1");
    if (!std::isfinite(cfg.volDrift)) throw DomainError("volDrift must be finite");
}

PathState simulate_vol_path(const SchemeConfig& cfg, NormalStream& rng) {
    const ModelParams& m = cfg.model;
    const double T = m.maturity;
    PathState ps;
    if (m.omega == 0.0 && cfg.volDrift == 0.0) {
        ps.vSum = m.sigma0 * m.sigma0 * T;
        ps.sigmaEnd = m.sigma0;
        ps.sigmaSum = m.sigma0 * T;
        return ps;
    }
    const std::int64_t n = cfg.nSteps;
    const double tau = cfg.tau();
    const double sq = std::sqrt(tau);
    const double drift = cfg.volDrift - 0.5 * m.omega * m.omega;
    double Z = 0.0, v = 0.0, s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        double sigma = m.sigma0 * std::exp(m.omega * Z + drift * (static_cast<double>(i) * tau));
        v += sigma * sigma;
        s += sigma;
        Z += sq * rng.next();
    }
    ps.vSum = v * tau;
    ps.sigmaSum = s * tau;
    ps.logSigmaDrift = drift * T;
    ps.sigmaEnd = m.sigma0 * std::exp(m.omega * Z + ps.logSigmaDrift);
    return ps;
}

double simulate_logS(const SchemeConfig& cfg, NormalStream& rng) {
    PathState ps = simulate_vol_path(cfg, rng);
    Conditional c = conditional_of(cfg, ps);
    return c.logForward + c.stdev * rng.next() - 0.5 * c.stdev * c.stdev;
}

McEstimate conditional_price(const SchemeConfig& cfg, double strike, bool isCall, std::int64_t nPaths,
                             std::uint64_t seed) {
    validate(cfg);
    if (!(strike > 0.0)) throw DomainError("strike must be positive");
    auto acc = run_paths(nPaths, 1, [&](std::uint64_t p, double* out) {
        NormalStream rng(seed, p);
        Conditional c = conditional_of(cfg, simulate_vol_path(cfg, rng));
        out[0] = path_price(c, strike, isCall);
    });
    return to_estimate(acc[0], seed);
}

McEstimate naive_price(const SchemeConfig& cfg, double strike, bool isCall, std::int64_t nPaths,
                       std::uint64_t seed) {
    validate(cfg);
    if (!(strike > 0.0)) throw DomainError("strike must be positive");
    auto acc = run_paths(nPaths, 1, [&](std::uint64_t p, double* out) {
        NormalStream rng(seed, p);
        double S = std::exp(simulate_logS(cfg, rng));
        out[0] = isCall ? std::max(S - strike, 0.0) : std::max(strike - S, 0.0);
    });
    return to_estimate(acc[0], seed);
}

McEstimate martingale_defect(const SchemeConfig& cfg, std::int64_t nPaths, std::uint64_t seed) {
    validate(cfg);
    auto acc = run_paths(nPaths, 1, [&](std::uint64_t p, double* out) {
        NormalStream rng(seed, p);
        out[0] = conditional_of(cfg, simulate_vol_path(cfg, rng)).forward / cfg.model.spot;
    });
    return to_estimate(acc[0], seed);
}

std::vector<double> sample_log_spot(const SchemeConfig& cfg, std::int64_t nPaths, std::uint64_t seed) {
    validate(cfg);
    if (nPaths < 1) throw DomainError("nPaths must be at least 1");
    std::vector<double> out(static_cast<std::size_t>(nPaths));
    const std::int64_t nBlocks = (nPaths + kBlock - 1) / kBlock;
    parallel_for(static_cast<std::size_t>(nBlocks), [&](std::size_t b) {
        std::int64_t first = static_cast<std::int64_t>(b) * kBlock;
        std::int64_t last = std::min(first + kBlock, nPaths);
        for (std::int64_t p = first; p < last; ++p) {
            NormalStream rng(seed, static_cast<std::uint64_t>(p));
            out[static_cast<std::size_t>(p)] = simulate_logS(cfg, rng);
        }
    });
    return out;
}

SampleMoments sample_moments(std::span<const double> xs) {
    SampleMoments m;
    const double n = static_cast<double>(xs.size());
    m.n = static_cast<std::int64_t>(xs.size());
    if (xs.size() < 2) throw DomainError("sample_moments: need at least two samples");
    Welford w;
    for (double x : xs) w.add(x);
    m.mean = w.mean;
    m.variance = w.m2 / (n - 1.0);
    double m4 = 0.0;
    for (double x : xs) {
        double d = x - w.mean;
        m4 += d * d * d * d;
    }
    m4 /= n;
    double s2 = w.m2 / n;
    m.meanStdError = std::sqrt(m.variance / n);
    m.varianceStdError = std::sqrt(std::max(m4 - s2 * s2, 0.0) / n);
    return m;
}

double almost_sure_limit(const SchemeConfig& cfg) {
    const double rho2 = cfg.model.sigma0 * cfg.model.sigma0 * cfg.tau();
    const double x = 2.0 * cfg.volDrift * cfg.model.maturity;
    const double factor = x == 0.0 ? 1.0 : std::expm1(x) / x;
    return -0.5 * rho2 * factor;
}

double exact_mean_log_spot_rate(const SchemeConfig& cfg) {
    const ModelParams& m = cfg.model;
    const double tau = cfg.tau();
    const double alpha = cfg.volDrift;
    const double w2 = m.omega * m.omega;
    double ev = 0.0, es = 0.0;
    for (std::int64_t i = 0; i < cfg.nSteps; ++i) {
        double t = static_cast<double>(i) * tau;
        ev += std::exp((2.0 * alpha + w2) * t);
        es += std::exp(alpha * t);
    }
    ev *= m.sigma0 * m.sigma0 * tau;
    es *= tau;
    double par = 0.0;
    if (m.omega > 0.0)
        par = m.corr / m.omega * m.sigma0 * (std::expm1(alpha * m.maturity) - alpha * es);
    return (-0.5 * ev + par) / static_cast<double>(cfg.nSteps);
}

std::string to_string(McPriceKind k) {
    switch (k) {
        case McPriceKind::Call: return "call";
        case McPriceKind::Put: return "put";
        case McPriceKind::CoveredCall: return "covered_call";
    }
    return "unknown";
}

std::vector<McSmilePoint> mc_smile(const SchemeConfig& cfg, std::span<const double> logStrikes,
                                   std::int64_t nPaths, std::uint64_t seed) {
    validate(cfg);
    const double S0 = cfg.model.spot;
    const std::size_t k = logStrikes.size();
    std::vector<double> K(k);
    for (std::size_t j = 0; j < k; ++j) K[j] = S0 * std::exp(logStrikes[j]);
    auto acc = run_paths(nPaths, 3 * k, [&](std::uint64_t p, double* out) {
        NormalStream rng(seed, p);
        Conditional c = conditional_of(cfg, simulate_vol_path(cfg, rng));
        for (std::size_t j = 0; j < k; ++j) {
            out[3 * j] = path_price(c, K[j], true);
            out[3 * j + 1] = path_price(c, K[j], false);
            out[3 * j + 2] = path_covered(S0, c, K[j]);
        }
    });

    const double T = cfg.model.maturity;
    std::vector<McSmilePoint> res(k);
    for (std::size_t j = 0; j < k; ++j) {
        McSmilePoint& pt = res[j];
        pt.logStrike = logStrikes[j];
        std::array<McEstimate, 3> est{to_estimate(acc[3 * j], seed), to_estimate(acc[3 * j + 1], seed),
                                      to_estimate(acc[3 * j + 2], seed)};
        int best = -1;
        for (int i = 0; i < 3; ++i)
            if (std::isfinite(est[i].mean) && (best < 0 || est[i].mean < est[best].mean)) best = i;
        if (best < 0) {
            pt.ok = false;
            pt.error = "no finite price estimate";
            pt.impliedVol = pt.volLow = pt.volHigh = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        pt.kind = static_cast<McPriceKind>(best);
        pt.price = est[best];
        auto invert = [&](double value) {
            double s = pt.kind == McPriceKind::CoveredCall
                           ? bs_implied_totalstdev_covered(value, S0, K[j])
                           : bs_implied_totalstdev(value, S0, K[j], pt.kind == McPriceKind::Call);
            return s / std::sqrt(T);
        };
        try {
            pt.impliedVol = invert(pt.price.mean);
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
            pt.impliedVol = pt.volLow = pt.volHigh = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        auto bumped = [&](double value, double fallback) {
            try {
                return invert(value);
            } catch (const std::exception&) {
                return fallback;
            }
        };
        const double inf = std::numeric_limits<double>::infinity();
        double lo = bumped(pt.price.mean - pt.price.stdError, 0.0);
        double hi = bumped(pt.price.mean + pt.price.stdError, inf);
        if (pt.kind == McPriceKind::CoveredCall) {
            // covered-call value decreases in volatility
            lo = bumped(pt.price.mean + pt.price.stdError, 0.0);
            hi = bumped(pt.price.mean - pt.price.stdError, inf);
        }
        pt.volLow = lo;
        pt.volHigh = hi;
    }
    return res;
}

double hull_white_map(double xi) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("hull_white_map: xi must be positive");
    return 0.5 * xi;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::FiniteMaturity: return "finite-maturity";
        case Regime::SmallMaturity: return "small-maturity";
        case Regime::LargeMaturity: return "large-maturity";
    }
    return "unknown";
}

RegimeInfo classify_regime(const SchemeConfig& cfg) {
    validate(cfg);
    const ModelParams& m = cfg.model;
    if (!(m.omega > 0.0)) throw DomainError("classify_regime: omega must be positive");
    RegimeInfo info;
    info.scaling = ScalingParams::from_model(m.sigma0, m.omega, m.corr, m.maturity, cfg.nSteps);
    if (cfg.nSteps < 2) return info;
    const double ln = std::log(static_cast<double>(cfg.nSteps));
    const std::array<double, 3> x{std::log(m.omega) / ln, std::log(m.sigma0) / ln,
                                  std::log(m.maturity) / ln};
    const std::array<std::array<double, 3>, 3> pattern{{{-0.5, 0.5, 0.0}, {0.0, 1.0, -1.0}, {-1.0, 0.0, 1.0}}};
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 3; ++r) {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += (x[i] - pattern[r][i]) * (x[i] - pattern[r][i]);
        if (d < best) {
            best = d;
            info.regime = static_cast<Regime>(r);
        }
    }
    info.distance = best;
    return info;
}

ModelParams finite_maturity_scaling(double s0, double w0, double maturity, double corr, std::int64_t n) {
    if (n < 1) throw DomainError("n must be at least 1");
    ModelParams m;
    const double sn = std::sqrt(static_cast<double>(n));
    m.sigma0 = s0 * sn;
    m.omega = w0 / sn;
    m.maturity = maturity;
    m.corr = corr;
    return m;
}

}  // namespace sabr_ldp
