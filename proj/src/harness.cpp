#include "crnrd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace crnrd {

double fit_decay_rate(const std::vector<SeriesPoint>& series, double t_a, double t_b,
                      bool envelope) {
    std::vector<SeriesPoint> window;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& p = series[i];
        if (p.t < t_a || p.t > t_b) continue;
        if (envelope) {
            // Keep local maxima only (series-wide neighbors).
            double prev = i > 0 ? series[i - 1].y : -std::numeric_limits<double>::infinity();
            double next = i + 1 < series.size() ? series[i + 1].y
                                                : -std::numeric_limits<double>::infinity();
            if (p.y < prev || p.y < next) continue;
        }
        window.push_back(p);
    }
    if (envelope && window.size() < 3) {
        // Too few peaks to fit an envelope; fall back to the full window.
        return fit_decay_rate(series, t_a, t_b, false);
    }
    if (window.size() < 10)
        throw Error(ErrorKind::InsufficientData,
                    "need at least 10 rows in the fit window, got " +
                        std::to_string(window.size()));
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const auto& p : window) {
        if (!(p.y > 0.0))
            throw Error(ErrorKind::NonpositiveSeries,
                        "series must be strictly positive for a log fit");
        double z = -std::log(p.y);
        st += p.t;
        sy += z;
        stt += p.t * p.t;
        sty += p.t * z;
    }
    const double n = static_cast<double>(window.size());
    double denom = n * stt - st * st;
    if (denom == 0.0)
        throw Error(ErrorKind::InsufficientData, "degenerate time values in fit window");
    return (n * sty - st * sy) / denom;
}

MuValue admissible_mu(int d) {
    if (d < 1) throw Error(ErrorKind::InvalidConfig, "dimension must be >= 1");
    MuValue mu;
    long long g = std::gcd(static_cast<long long>(d) + 4, static_cast<long long>(d));
    mu.num = (d + 4) / g;
    mu.den = d / g;
    mu.in_theorem = d <= 4;
    return mu;
}

P0Value critical_p0(int d, double mu) {
    if (d < 1) throw Error(ErrorKind::InvalidConfig, "dimension must be >= 1");
    P0Value p0;
    p0.value = d * (mu - 1.0) / 2.0;
    p0.in_proposition = d >= 3;
    return p0;
}

double perturbation_exponent_delta(const ReactionNetwork& net) {
    double inner = std::numeric_limits<double>::infinity();
    for (const auto& rx : net.reactions())
        for (const ComplexVec* side : {&rx.reactant, &rx.product})
            for (Eigen::Index j = 0; j < side->coeffs.size(); ++j) {
                double y = side->coeffs[j];
                if (y > 1.0) inner = std::min(inner, y);
            }
    double one_plus_delta = std::min(2.0, inner); // empty inner min -> 2
    return one_plus_delta - 1.0;
}

namespace {

bool has_complex_spectrum(const Eigen::MatrixXd& l) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(l, false);
    return es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-9;
}

} // namespace

VerificationReport run_verification(const ReactionNetwork& net, const SimConfig& config,
                                    const VerificationOptions& options) {
    VerificationReport rep;
    rep.options = options;
    rep.network_id = config.network_path;
    rep.mu = nonlinearity_order(net);
    rep.mu_admissible = admissible_mu(config.domain.dim);
    rep.mu_in_regime = rep.mu <= rep.mu_admissible.value() + 1e-12;

    StoichData stoich;
    EquilibriumCertificate cert;
    try {
        stoich = analyze_stoichiometry(net);
    } catch (const Error& e) {
        rep.failure_stage = "stoichiometry";
        rep.failure = e.what();
        return rep;
    }
    try {
        cert = certify_equilibrium(net, stoich, config.mass, options.tol_cb);
    } catch (const Error& e) {
        rep.failure_stage = "equilibrium";
        rep.failure = e.what();
        return rep;
    }
    rep.classification = cert.classification;
    if (cert.classification == BalanceClass::NotComplexBalanced) {
        rep.failure_stage = "equilibrium";
        rep.failure = "NotComplexBalanced: " + cert.failure;
        return rep;
    }
    rep.u_inf = *cert.u_inf;

    SpectralCertificate gap;
    LinearizedOperator lin;
    try {
        lin = linearize(net, rep.u_inf, config.diffusion);
        gap = gap_certificate(net, rep.u_inf, config.diffusion, stoich.Q, config.domain);
    } catch (const Error& e) {
        rep.failure_stage = "spectral";
        rep.failure = e.what();
        return rep;
    }
    rep.beta = gap.beta;
    rep.poincare = gap.poincare;
    rep.lambda = gap.lambda;
    rep.target_rate = 2.0 * gap.lambda;
    rep.oscillatory = has_complex_spectrum(lin.L);

    SimResult sim;
    try {
        sim = simulate(net, rep.u_inf, stoich.Q, config);
    } catch (const Error& e) {
        rep.failure_stage = "simulate";
        rep.failure = e.what();
        return rep;
    }
    rep.series = sim.rows;
    rep.clamp_count = sim.total_clamps;

    double mass_scale = 1.0 + sim.rows.front().mass.lpNorm<Eigen::Infinity>();
    for (const auto& row : sim.rows)
        rep.conservation_drift =
            std::max(rep.conservation_drift,
                     (row.mass - sim.rows.front().mass).lpNorm<Eigen::Infinity>() / mass_scale);

    try {
        std::vector<SeriesPoint> series;
        series.reserve(sim.rows.size());
        for (const auto& row : sim.rows) series.push_back({row.t, row.l2w_sq});
        rep.fitted_rate = fit_decay_rate(series, options.fit_window_lo * config.t_end,
                                         options.fit_window_hi * config.t_end,
                                         rep.oscillatory);
    } catch (const Error& e) {
        rep.failure_stage = "fit";
        rep.failure = e.what();
        return rep;
    }

    rep.ratio = rep.target_rate > 0.0 ? rep.fitted_rate / rep.target_rate : 0.0;
    rep.pass_rate = rep.ratio >= 1.0 - options.tol_fit;
    rep.pass_drift = rep.conservation_drift <= 1e-10;
    rep.pass_clamps = rep.clamp_count == 0;
    rep.pass = rep.pass_rate && rep.pass_drift && rep.pass_clamps;
    return rep;
}

} // namespace crnrd
