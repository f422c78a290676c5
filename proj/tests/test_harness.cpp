#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crnrd/harness.hpp"
#include "crnrd/report.hpp"
#include "fixture_util.hpp"

using namespace crnrd;
using crnrd_tests::Rng;
using crnrd_tests::fixture_path;
using crnrd_tests::load_fixture;

namespace {

std::vector<SeriesPoint> sample(double (*f)(double), double t0, double t1, int n) {
    std::vector<SeriesPoint> out;
    for (int i = 0; i < n; ++i) {
        double t = t0 + (t1 - t0) * i / (n - 1);
        out.push_back({t, f(t)});
    }
    return out;
}

} // namespace

TEST_CASE("fit_decay_rate on exact exponential data") {
    auto series = sample([](double t) { return 7.0 * std::exp(-3.0 * t); }, 0, 2, 100);
    CHECK(fit_decay_rate(series, 0.0, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fit_decay_rate on a constant series is zero") {
    auto series = sample([](double) { return 4.2; }, 0, 2, 50);
    CHECK(fit_decay_rate(series, 0.0, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("fit_decay_rate with multiplicative noise") {
    Rng rng(17);
    std::vector<SeriesPoint> series;
    for (int i = 0; i < 200; ++i) {
        double t = 2.0 * i / 199.0;
        double noise = 1.0 + rng.uniform(-1e-3, 1e-3);
        series.push_back({t, std::exp(-2.0 * t) * noise});
    }
    CHECK(std::abs(fit_decay_rate(series, 0.0, 2.0) - 2.0) < 1e-2);
}

TEST_CASE("fit_decay_rate is invariant under y rescaling") {
    auto series = sample([](double t) { return std::exp(-1.7 * t); }, 0, 3, 80);
    double r1 = fit_decay_rate(series, 0.5, 2.5);
    for (auto& p : series) p.y *= 123.456;
    CHECK(fit_decay_rate(series, 0.5, 2.5) == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("fit_decay_rate window and positivity requirements") {
    auto series = sample([](double t) { return std::exp(-t); }, 0, 1, 5);
    try {
        fit_decay_rate(series, 0.0, 1.0); // only 5 rows
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
    auto series2 = sample([](double t) { return 1.0 - t; }, 0, 2, 50); // hits <= 0
    try {
        fit_decay_rate(series2, 0.0, 2.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonpositiveSeries);
    }
}

TEST_CASE("fit_decay_rate envelope mode fits the peaks") {
    // Oscillatory decay: e^{-t} (1 + 0.5 cos(20 t))^2-like series whose
    // envelope decays at rate 1 while the instantaneous slope oscillates.
    std::vector<SeriesPoint> series;
    for (int i = 0; i <= 2000; ++i) {
        double t = 5.0 * i / 2000.0;
        series.push_back({t, std::exp(-t) * (1.1 + std::cos(20.0 * t))});
    }
    double enveloped = fit_decay_rate(series, 0.5, 4.5, true);
    CHECK(std::abs(enveloped - 1.0) < 0.05);
}

TEST_CASE("admissible_mu reproduces the dimension table") {
    CHECK(admissible_mu(1).num == 5);
    CHECK(admissible_mu(1).den == 1);
    CHECK(admissible_mu(2).num == 3);
    CHECK(admissible_mu(2).den == 1);
    CHECK(admissible_mu(3).num == 7);
    CHECK(admissible_mu(3).den == 3);
    CHECK(admissible_mu(4).num == 2);
    CHECK(admissible_mu(4).den == 1);
    for (int d = 1; d <= 4; ++d) {
        MuValue mu = admissible_mu(d);
        CHECK(mu.in_theorem);
        CHECK(mu.num * d == (d + 4) * mu.den); // mu * d = d + 4 exactly
    }
    CHECK(!admissible_mu(5).in_theorem);
    CHECK(admissible_mu(5).value() == doctest::Approx(9.0 / 5.0));
}

TEST_CASE("critical_p0") {
    P0Value p = critical_p0(4, 2.0);
    CHECK(p.value == doctest::Approx(2.0));
    CHECK(p.in_proposition);
    CHECK(critical_p0(3, 7.0 / 3.0).value == doctest::Approx(2.0));
    CHECK(critical_p0(2, 1.0).value == doctest::Approx(0.0));
    CHECK(!critical_p0(2, 3.0).in_proposition);
}

TEST_CASE("perturbation_exponent_delta") {
    CHECK(perturbation_exponent_delta(load_fixture("net_ab.crn")) == doctest::Approx(1.0));
    CHECK(perturbation_exponent_delta(load_fixture("net_quintic.crn")) ==
          doctest::Approx(1.0)); // min{2, 4, 5} - 1
    auto frac = parse_network_or_throw("1.5 A -> B ; k=1\n");
    CHECK(perturbation_exponent_delta(frac) == doctest::Approx(0.5));
}

TEST_CASE("run_verification end to end on net_ab") {
    SimConfig cfg = load_sim_config_file(fixture_path("cfg_ab_1d.json"));
    cfg.cells = {64, 1}; // smaller grid for unit-test speed
    auto net = load_fixture("net_ab.crn");
    VerificationReport rep = run_verification(net, cfg);
    CHECK(rep.pass);
    CHECK(rep.failure_stage.empty());
    CHECK(rep.classification == BalanceClass::DetailedBalanced);
    CHECK(rep.lambda == doctest::Approx(2.0));
    CHECK(rep.target_rate == doctest::Approx(4.0));
    CHECK(std::abs(rep.fitted_rate - 4.0) < 0.05 * 4.0);
    CHECK(rep.mu_in_regime); // mu = 1 <= 5 in d = 1
    CHECK(!rep.oscillatory);
    CHECK(rep.clamp_count == 0);
}

TEST_CASE("run_verification flags oscillatory networks and fits the envelope") {
    SimConfig cfg = load_sim_config_file(fixture_path("cfg_tri_1d.json"));
    cfg.cells = {48, 1};
    auto net = load_fixture("net_tri.crn");
    VerificationReport rep = run_verification(net, cfg);
    CHECK(rep.oscillatory);
    CHECK(rep.pass);
    CHECK(rep.fitted_rate >= 0.95 * 2.0 * rep.lambda);
}

TEST_CASE("run_verification fails at the equilibrium stage for net_ab_irrev") {
    SimConfig cfg = load_sim_config_file(fixture_path("cfg_ab_1d.json"));
    auto net = load_fixture("net_ab_irrev.crn");
    VerificationReport rep = run_verification(net, cfg);
    CHECK(!rep.pass);
    CHECK(rep.failure_stage == "equilibrium");
    CHECK(rep.failure.find("NotComplexBalanced") != std::string::npos);
}

TEST_CASE("verification report JSON has stable keys and round-trips the verdict") {
    SimConfig cfg = load_sim_config_file(fixture_path("cfg_ab_1d.json"));
    cfg.cells = {64, 1};
    auto net = load_fixture("net_ab.crn");
    VerificationReport rep = run_verification(net, cfg);
    Json j = verification_report_json(rep);
    CHECK(j.at("pass").get<bool>() == rep.pass);
    CHECK(j.at("certificate").at("lambda").get<double>() == rep.lambda);
    auto keys = std::vector<std::string>{};
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys.front() == "network"); // ordered_json preserves insertion order
}

TEST_CASE("series_csv header and gnuplot companion") {
    std::vector<SimRow> rows(2);
    rows[0].t = 0.0;
    rows[0].l2w_sq = 1.0;
    rows[0].mass = Eigen::VectorXd::Ones(2);
    rows[1].t = 0.5;
    rows[1].l2w_sq = 0.25;
    rows[1].mass = Eigen::VectorXd::Ones(2);
    std::string csv = series_csv(rows);
    CHECK(csv.rfind("t,l2w_sq,linf,mass_1,mass_2,min_u,clamps\n", 0) == 0);
    std::string dat = series_gnuplot(rows);
    CHECK(dat.find("0 0\n") != std::string::npos);          // log(1) = 0
    CHECK(dat.find("0.5 -1.38629") != std::string::npos);   // log(0.25)
}

TEST_CASE("sim config loader resolves relative network paths and validates") {
    SimConfig cfg = load_sim_config_file(fixture_path("cfg_ab_1d.json"));
    CHECK(cfg.network_path.find("net_ab.crn") != std::string::npos);
    CHECK(cfg.diffusion.size() == 2);
    CHECK(cfg.domain.dim == 1);
    CHECK(cfg.cells[0] == 200);
    CHECK(cfg.modes.size() == 1);
    try {
        load_sim_config(Json{{"network", "x.crn"}}, "");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
}
