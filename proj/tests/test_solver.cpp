#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "crnrd/equilibria.hpp"
#include "crnrd/solver.hpp"
#include "fixture_util.hpp"

using namespace crnrd;
using crnrd_tests::load_fixture;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

SimConfig base_config_ab() {
    SimConfig cfg;
    cfg.diffusion = vec({1.0, 1.0});
    cfg.domain = Domain{1, {1.0, 1.0}};
    cfg.cells = {64, 1};
    cfg.epsilon = 1e-3;
    PerturbationMode mode;
    mode.weights = vec({0.5, -0.5});
    cfg.modes.push_back(mode);
    cfg.t_end = 0.5;
    cfg.dt = 1e-3;
    cfg.stride = 10;
    return cfg;
}

} // namespace

TEST_CASE("build_grid hand values") {
    Grid g = build_grid(Domain{1, {1.0, 1.0}}, {10, 1});
    CHECK(g.dx() == doctest::Approx(0.1));
    CHECK((0 + 0.5) * g.dx() == doctest::Approx(0.05)); // x_0 cell center

    Grid g2 = build_grid(Domain{1, {2.0, 1.0}}, {8, 1});
    CHECK(g2.dx() == doctest::Approx(0.25));

    try {
        build_grid(Domain{1, {1.0, 1.0}}, {4, 1});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridTooCoarse);
    }
}

TEST_CASE("equilibrium is a fixed point of imex_step") {
    auto ab = load_fixture("net_ab.crn");
    Grid grid = build_grid(Domain{1, {1.0, 1.0}}, {32, 1});
    Field field;
    field.state.resize(2, grid.total_cells());
    field.state.colwise() = vec({0.7, 0.7});
    Eigen::MatrixXd before = field.state;
    long clamps = imex_step(ab, grid, vec({1, 1}), field, 1e-3);
    CHECK(clamps == 0);
    CHECK((field.state - before).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("pure diffusion mode decay matches the discrete eigenvalue oracle") {
    // u_A = u_B pointwise keeps the A <-> B (k = kr = 1) reaction silent, so
    // the step is pure diffusion. A cos(pi x / L) profile is a discrete
    // eigenfunction: each step multiplies its amplitude by 1/(1 + dt d lam_h).
    auto ab = load_fixture("net_ab.crn");
    const int n = 64;
    const double length = 1.0, d = 0.7, dt = 2e-3;
    Grid grid = build_grid(Domain{1, {length, 1.0}}, {n, 1});
    double dx = grid.dx();

    Eigen::VectorXd mode(n);
    for (int c = 0; c < n; ++c) mode[c] = std::cos(pi * (c + 0.5) * dx / length);

    Field field;
    field.state.resize(2, n);
    for (int c = 0; c < n; ++c)
        field.state.col(c) = vec({1.0 + 0.01 * mode[c], 1.0 + 0.01 * mode[c]});

    double lam_h = 2.0 * (1.0 - std::cos(pi * dx / length)) / (dx * dx);
    auto amplitude = [&](const Field& f) {
        // Project species A onto the discrete mode.
        double num = 0.0, den = 0.0;
        for (int c = 0; c < n; ++c) {
            num += (f.state(0, c) - 1.0) * mode[c];
            den += mode[c] * mode[c];
        }
        return num / den;
    };

    double a = amplitude(field);
    for (int step = 0; step < 20; ++step) {
        imex_step(ab, grid, vec({d, d}), field, dt);
        a /= 1.0 + dt * d * lam_h;
        CHECK(amplitude(field) == doctest::Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("uniform fields reduce to the reaction ODE") {
    auto tri = load_fixture("net_tri.crn");
    Grid grid = build_grid(Domain{1, {1.0, 1.0}}, {16, 1});
    Eigen::VectorXd u0 = vec({1.0, 2.0, 3.0});
    Field field;
    field.state.resize(3, grid.total_cells());
    field.state.colwise() = u0;
    double dt = 1e-3;
    imex_step(tri, grid, vec({1, 1, 1}), field, dt);
    Eigen::VectorXd expected = u0 + dt * reaction_rhs(tri, u0);
    for (int c = 0; c < grid.total_cells(); ++c)
        CHECK((field.state.col(c) - expected).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("simulate from epsilon = 0 stays at equilibrium") {
    auto ab = load_fixture("net_ab.crn");
    StoichData s = analyze_stoichiometry(ab);
    SimConfig cfg = base_config_ab();
    cfg.epsilon = 0.0;
    SimResult res = simulate(ab, vec({1.0, 1.0}), s.Q, cfg);
    for (const auto& row : res.rows) {
        CHECK(row.l2w_sq <= 1e-12);
        CHECK(row.linf <= 1e-12);
    }
    CHECK(res.total_clamps == 0);
}

TEST_CASE("simulate row count and cumulative clamp column") {
    auto ab = load_fixture("net_ab.crn");
    StoichData s = analyze_stoichiometry(ab);
    SimConfig cfg = base_config_ab();
    SimResult res = simulate(ab, vec({1.0, 1.0}), s.Q, cfg);
    long expected_rows =
        static_cast<long>(std::floor(cfg.t_end / (cfg.dt * cfg.stride))) + 1;
    CHECK(static_cast<long>(res.rows.size()) == expected_rows);
    CHECK(res.rows.front().t == 0.0);
    long prev = 0;
    for (const auto& row : res.rows) {
        CHECK(row.clamps >= prev); // cumulative
        prev = row.clamps;
    }
}

TEST_CASE("simulate conserves Q u_bar") {
    auto quintic = load_fixture("net_quintic.crn");
    StoichData s = analyze_stoichiometry(quintic);
    SimConfig cfg = base_config_ab();
    cfg.modes[0].weights = vec({0.5, -0.5});
    SimResult res = simulate(quintic, vec({1.0, 1.0}), s.Q, cfg);
    Eigen::VectorXd m0 = res.rows.front().mass;
    for (const auto& row : res.rows)
        CHECK((row.mass - m0).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + m0.lpNorm<Eigen::Infinity>()));
    CHECK(res.total_clamps == 0);
}

TEST_CASE("uniform modes must not move the conserved mass") {
    auto ab = load_fixture("net_ab.crn");
    StoichData s = analyze_stoichiometry(ab);
    SimConfig cfg = base_config_ab();
    cfg.modes[0].weights = vec({1.0, 1.0}); // Q a = 2 != 0
    try {
        simulate(ab, vec({1.0, 1.0}), s.Q, cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
    // j >= 1 modes carry zero average and need no constraint.
    cfg.modes[0].index_x = 3;
    SimResult res = simulate(ab, vec({1.0, 1.0}), s.Q, cfg);
    CHECK(res.rows.back().l2w_sq < res.rows.front().l2w_sq);
}

TEST_CASE("simulate is deterministic across thread counts") {
    auto tri = load_fixture("net_tri.crn");
    StoichData s = analyze_stoichiometry(tri);
    SimConfig cfg;
    cfg.diffusion = vec({1.0, 0.5, 0.25});
    cfg.domain = Domain{1, {1.0, 1.0}};
    cfg.cells = {48, 1};
    cfg.epsilon = 1e-3;
    PerturbationMode mode;
    mode.weights = vec({1.0, -0.5, -0.5});
    cfg.modes.push_back(mode);
    cfg.t_end = 0.2;
    cfg.dt = 1e-3;
    cfg.stride = 5;

    cfg.threads = 1;
    SimResult a = simulate(tri, vec({1, 1, 1}), s.Q, cfg);
    cfg.threads = 4;
    SimResult b = simulate(tri, vec({1, 1, 1}), s.Q, cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].l2w_sq == b.rows[i].l2w_sq); // bitwise
        CHECK(a.rows[i].linf == b.rows[i].linf);
        CHECK(a.rows[i].mass == b.rows[i].mass);
        CHECK(a.rows[i].min_u == b.rows[i].min_u);
    }
    CHECK((a.final_field.state - b.final_field.state).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("2D simulate: decay and conservation") {
    auto ab = load_fixture("net_ab.crn");
    StoichData s = analyze_stoichiometry(ab);
    SimConfig cfg;
    cfg.diffusion = vec({1.0, 1.0});
    cfg.domain = Domain{2, {1.0, 2.0}};
    cfg.cells = {16, 24};
    cfg.epsilon = 1e-3;
    PerturbationMode mode;
    mode.weights = vec({1.0, -1.0});
    mode.index_x = 1;
    mode.index_y = 2;
    cfg.modes.push_back(mode);
    cfg.t_end = 0.3;
    cfg.dt = 1e-3;
    cfg.stride = 10;
    SimResult res = simulate(ab, vec({1, 1}), s.Q, cfg);
    CHECK(res.rows.back().l2w_sq < 1e-3 * res.rows.front().l2w_sq);
    Eigen::VectorXd m0 = res.rows.front().mass;
    for (const auto& row : res.rows)
        CHECK((row.mass - m0).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("divergence raises NonFiniteState") {
    // u' = u^2 blows up in finite time while staying positive, so the state
    // overflows to inf instead of going negative.
    auto net = parse_network_or_throw("2 A -> 3 A ; k=1\n");
    StoichData s = analyze_stoichiometry(net);
    SimConfig cfg;
    cfg.diffusion = vec({1.0});
    cfg.domain = Domain{1, {1.0, 1.0}};
    cfg.cells = {16, 1};
    cfg.epsilon = 1.0;
    PerturbationMode mode;
    mode.weights = vec({1.0});
    cfg.modes.push_back(mode);
    cfg.t_end = 100.0;
    cfg.dt = 1.0;
    bool threw = false;
    try {
        simulate(net, vec({1.0}), s.Q, cfg);
    } catch (const Error& e) {
        threw = true;
        CHECK(e.kind() == ErrorKind::NonFiniteState);
    }
    CHECK(threw);
}
