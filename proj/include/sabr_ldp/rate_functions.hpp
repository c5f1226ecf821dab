#pragma once

#include <cstdint>
#include <string>

namespace sabr_ldp {

/// Scaled parameters of the discrete-time scheme in the n -> infinity limit.
struct ScalingParams {
    double beta = 0.0;      // omega^2 tau n^2 / 2
    double rho = 0.0;       // sigma0 sqrt(tau)
    double a = 0.0;         // 4 beta rho^2
    double v0 = 0.0;        // rho / sqrt(2 beta)
    double corr = 0.0;
    double corrPerp = 1.0;  // sqrt(1 - corr^2)
    std::int64_t n = 1;
    double tau = 1.0;

    static ScalingParams from_model(double sigma0, double omega, double corr, double maturity,
                                    std::int64_t n);
    static ScalingParams from_beta_rho(double beta, double rho, double corr, std::int64_t n = 1,
                                       double tau = 1.0);
};

enum class Branch { CaseI, CaseII, Diagonal, Uncorrelated1, Uncorrelated2, Boundary };
std::string to_string(Branch b);

struct RateEval {
    double value = 0.0;
    double uStar = 1.0;
    double vStar = 1.0;
    Branch branch = Branch::Boundary;
    double solverVar = 0.0;  // xi, lambda or phi at the minimizer
    bool researchMode = false;  // set when evaluated with positive correlation
};

/// I(u, v), the rate function of (V_n/n, sigma_n/(n omega)) in scaled variables.
double rate_I(double uBar, double vBar);

/// Same function through the Hartman-Watson representation.
double rate_I_via_F(double uBar, double vBar);

/// Quartic (or quadratic) Taylor polynomial of I in eps = log u, eta = log v.
double rate_I_quartic(double uBar, double vBar, bool quadratic_only = false);

/// I and its derivatives in log coordinates (eps, eta).
struct RateILog {
    double value = 0.0;
    double de = 0.0, dh = 0.0;
    double dee = 0.0, deh = 0.0, dhh = 0.0;
};
RateILog rate_I_log(double eps, double eta);

double rate_J_BS(double x);
double rate_J_BS_prime(double x);

/// Closed form of J_X at zero correlation.
RateEval rate_J_X_uncorr(double y, double a);

struct JxOptions {
    bool forceOptimizer = false;      // skip the closed form at corr = 0
    bool allowPositiveCorr = false;   // research use only
};

/// J_X(y; a, corr) by constrained minimization of the joint rate function.
RateEval rate_J_X(double y, double a, double corr, const JxOptions& opts = {});

/// Which I(u, v) enters the martingale-point problem.  `Quadratic` uses
/// 12 eps^2 - 24 eps eta + 16 eta^2 and is kept for comparison with reference values computed that way.
enum class RateModel { Exact, Quadratic };

struct MartingalePoint {
    double uM = 1.0;
    double vM = 1.0;
    double infimum = 0.0;
};

MartingalePoint martingale_min_point(double a, double corr, RateModel model = RateModel::Exact,
                                     bool allowPositiveCorr = false);

/// y_R = (1/2)(1 - 2 corr^2) uM + corr sqrt(2/a) (vM - 1).
double switch_point_yR(double a, double corr);
double switch_point_yR(const MartingalePoint& p, double a, double corr);

/// Coefficient k in J_X(y) ~ k (y + 1/2)^2.
double rate_J_X_quadratic_coeff(double a, double corr);

/// Large-x expansion of J_X(x; a, 0), x >= 10.
double rate_J_X_large_x(double x, double a);

/// I_X(k) = J_X(k / rho^2; 4 beta rho^2, corr) / (8 beta).
double rate_I_X(double k, const ScalingParams& sp);

/// Value and log-coordinate gradient of the J_X objective at (log u, log v).
/// Undefined for |corr| = 1.
struct ObjectiveEval {
    double value = 0.0;
    double dLogU = 0.0;
    double dLogV = 0.0;
};
ObjectiveEval jx_objective(double y, double a, double corr, double logU, double logV);

/// Caches the martingale point and y_R for repeated J_X evaluations at fixed (a, corr).
class JxSolver {
public:
    JxSolver(double a, double corr, const JxOptions& opts = {});

    RateEval operator()(double y) const;

    double a() const { return a_; }
    double corr() const { return corr_; }
    double yR() const { return yR_; }
    const MartingalePoint& martingalePoint() const { return mp_; }

private:
    double a_;
    double corr_;
    JxOptions opts_;
    MartingalePoint mp_;
    double yR_;
};

}  // namespace sabr_ldp
