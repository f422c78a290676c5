#ifndef CRNRD_HARNESS_HPP
#define CRNRD_HARNESS_HPP

#include <string>
#include <vector>

#include "crnrd/equilibria.hpp"
#include "crnrd/network.hpp"
#include "crnrd/solver.hpp"
#include "crnrd/spectral.hpp"

namespace crnrd {

struct SeriesPoint {
    double t = 0.0;
    double y = 0.0;
};

/// Least-squares slope of -ln y versus t over [t_a, t_b]. With `envelope`,
/// the fit runs on the local maxima of the series (falls back to all points
/// when fewer than 3 peaks exist). Throws InsufficientData (< 10 rows in
/// window) and NonpositiveSeries.
double fit_decay_rate(const std::vector<SeriesPoint>& series, double t_a, double t_b,
                      bool envelope = false);

struct MuValue {
    long long num = 0;
    long long den = 1;
    bool in_theorem = true; // d <= 4
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// mu = (d + 4) / d as an exact rational; flagged out-of-theorem for d >= 5.
MuValue admissible_mu(int d);

struct P0Value {
    double value = 0.0;
    bool in_proposition = true; // d >= 3
};

/// p0 = d (mu - 1) / 2.
P0Value critical_p0(int d, double mu);

/// delta in (0,1] with 1 + delta = min{2, min{y_{r,j} : y_{r,j} > 1}};
/// an empty inner min yields delta = 1.
double perturbation_exponent_delta(const ReactionNetwork& net);

struct VerificationOptions {
    double fit_window_lo = 0.2; // fractions of t_end
    double fit_window_hi = 0.9;
    double tol_fit = 0.05;      // pass needs fitted/target >= 1 - tol_fit
    double tol_cb = 1e-8;       // log-linear complex-balance decision
    unsigned seed = 0;          // recorded for reproducibility
};

struct VerificationReport {
    std::string network_id;
    BalanceClass classification = BalanceClass::NotComplexBalanced;
    Eigen::VectorXd u_inf;
    double beta = 0.0;
    double poincare = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    MuValue mu_admissible;
    bool mu_in_regime = false;
    double fitted_rate = 0.0;
    double target_rate = 0.0;   // 2 lambda
    double ratio = 0.0;
    double conservation_drift = 0.0;
    long clamp_count = 0;
    bool oscillatory = false;   // envelope fit used
    bool pass_rate = false;
    bool pass_drift = false;
    bool pass_clamps = false;
    bool pass = false;
    std::string failure_stage;  // empty unless the pipeline aborted
    std::string failure;
    std::vector<SimRow> series;
    VerificationOptions options;
};

/// Full pipeline: stoichiometry -> equilibrium -> spectral certificate ->
/// simulate -> decay fit, with per-criterion pass flags.
VerificationReport run_verification(const ReactionNetwork& net, const SimConfig& config,
                                    const VerificationOptions& options = {});

} // namespace crnrd

#endif
