#include "crnrd/solver.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

namespace crnrd {

Grid build_grid(const Domain& domain, const std::array<int, 2>& cells) {
    if (domain.dim != 1 && domain.dim != 2)
        throw Error(ErrorKind::UnsupportedDomain, "grid supports dim 1 and 2 only");
    Grid g;
    g.domain = domain;
    g.cells = cells;
    if (domain.dim == 1) g.cells[1] = 1;
    for (int axis = 0; axis < domain.dim; ++axis) {
        if (g.cells[axis] < 8)
            throw Error(ErrorKind::GridTooCoarse,
                        "need at least 8 cells per axis, got " +
                            std::to_string(g.cells[axis]));
        if (domain.lengths[axis] <= 0.0)
            throw Error(ErrorKind::UnsupportedDomain, "domain lengths must be positive");
    }
    return g;
}

namespace {

// Solve (I - r * Lap_h) x = rhs along one line of n cells, where Lap_h is the
// second-order Neumann ghost-cell Laplacian with unit spacing folded into r.
// In-place Thomas algorithm; strided access via (ptr, stride).
void neumann_line_solve(double* x, int n, int stride, double r,
                        std::vector<double>& scratch_c, std::vector<double>& scratch_d) {
    // Row 0 and n-1: diag 1 + r, interior: 1 + 2r; off-diagonals -r.
    auto& c = scratch_c; // modified upper diagonal
    auto& d = scratch_d; // modified rhs
    c.resize(n);
    d.resize(n);
    double diag0 = 1.0 + r;
    c[0] = -r / diag0;
    d[0] = x[0] / diag0;
    for (int i = 1; i < n; ++i) {
        double diag = (i == n - 1) ? 1.0 + r : 1.0 + 2.0 * r;
        double denom = diag + r * c[i - 1];
        c[i] = -r / denom;
        d[i] = (x[i * stride] + r * d[i - 1]) / denom;
    }
    x[(n - 1) * stride] = d[n - 1];
    for (int i = n - 2; i >= 0; --i)
        x[i * stride] = d[i] - c[i] * x[(i + 1) * stride];
}

void parallel_for(int begin, int end, int threads, const std::function<void(int, int)>& body) {
    if (threads <= 1 || end - begin <= 1) {
        body(begin, end);
        return;
    }
    int n_threads = std::min(threads, end - begin);
    int chunk = (end - begin + n_threads - 1) / n_threads;
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) {
        int lo = begin + t * chunk;
        int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace

long imex_step(const ReactionNetwork& net, const Grid& grid,
               const Eigen::VectorXd& diffusion, Field& field, double dt,
               bool clamp_negatives, int threads) {
    const int n_species = net.num_species();
    const int n_cells = grid.total_cells();
    Eigen::MatrixXd& u = field.state;

    // Explicit reaction substep, cell-parallel; each thread owns a cell range.
    std::vector<long> clamp_counts(std::max(threads, 1), 0);
    Eigen::MatrixXd reacted(n_species, n_cells);
    {
        std::atomic<int> slot{0};
        parallel_for(0, n_cells, threads, [&](int lo, int hi) {
            int my_slot = slot.fetch_add(1);
            long clamps = 0;
            for (int c = lo; c < hi; ++c) {
                Eigen::VectorXd uc = u.col(c);
                Eigen::VectorXd next = uc + dt * reaction_rhs(net, uc);
                if (clamp_negatives) {
                    for (int i = 0; i < n_species; ++i)
                        if (next[i] < 0.0) {
                            next[i] = 0.0;
                            ++clamps;
                        }
                }
                reacted.col(c) = next;
            }
            clamp_counts[my_slot] += clamps;
        });
    }
    u = std::move(reacted);

    // Implicit diffusion, species-parallel. The tridiagonal Neumann solve
    // preserves each species' cell sum exactly in exact arithmetic.
    parallel_for(0, n_species, threads, [&](int lo, int hi) {
        std::vector<double> scratch_c, scratch_d;
        for (int i = lo; i < hi; ++i) {
            double rx = dt * diffusion[i] / (grid.dx() * grid.dx());
            if (grid.domain.dim == 1) {
                neumann_line_solve(&u(i, 0), grid.nx(), static_cast<int>(u.rows()), rx,
                                   scratch_c, scratch_d);
            } else {
                double ry = dt * diffusion[i] / (grid.dy() * grid.dy());
                // x-direction sweeps: contiguous within each row of cells.
                std::vector<double> line(std::max(grid.nx(), grid.ny()));
                for (int iy = 0; iy < grid.ny(); ++iy) {
                    for (int ix = 0; ix < grid.nx(); ++ix)
                        line[ix] = u(i, grid.cell_index(ix, iy));
                    neumann_line_solve(line.data(), grid.nx(), 1, rx, scratch_c, scratch_d);
                    for (int ix = 0; ix < grid.nx(); ++ix)
                        u(i, grid.cell_index(ix, iy)) = line[ix];
                }
                // y-direction sweeps.
                for (int ix = 0; ix < grid.nx(); ++ix) {
                    for (int iy = 0; iy < grid.ny(); ++iy)
                        line[iy] = u(i, grid.cell_index(ix, iy));
                    neumann_line_solve(line.data(), grid.ny(), 1, ry, scratch_c, scratch_d);
                    for (int iy = 0; iy < grid.ny(); ++iy)
                        u(i, grid.cell_index(ix, iy)) = line[iy];
                }
            }
        }
    });

    if (!u.allFinite())
        throw Error(ErrorKind::NonFiniteState,
                    "state became non-finite at t = " + std::to_string(field.time));
    field.time += dt;
    long clamps = 0;
    for (long c : clamp_counts) clamps += c;
    return clamps;
}

namespace {

Field initial_field(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                    const Eigen::MatrixXd& Q, const Grid& grid, const SimConfig& config) {
    constexpr double pi = std::numbers::pi;
    const int n_species = net.num_species();
    Field field;
    field.state.resize(n_species, grid.total_cells());
    field.state.colwise() = u_inf;
    for (const auto& mode : config.modes) {
        if (mode.weights.size() != n_species)
            throw Error(ErrorKind::InvalidConfig, "mode weights length != species count");
        if (mode.index_x < 0 || mode.index_y < 0)
            throw Error(ErrorKind::InvalidConfig, "mode indices must be >= 0");
        if (mode.index_x == 0 && mode.index_y == 0 && Q.rows() > 0) {
            // Uniform modes shift the averages; they must not move the mass.
            double drift = (Q * mode.weights).lpNorm<Eigen::Infinity>();
            if (drift > 1e-12)
                throw Error(ErrorKind::InvalidConfig,
                            "uniform (j = 0) mode weights must satisfy Q a = 0");
        }
        for (int iy = 0; iy < grid.ny(); ++iy) {
            double y = (iy + 0.5) * (grid.domain.dim == 2 ? grid.dy() : 1.0);
            double cy = grid.domain.dim == 2
                            ? std::cos(mode.index_y * pi * y / grid.domain.lengths[1])
                            : 1.0;
            for (int ix = 0; ix < grid.nx(); ++ix) {
                double x = (ix + 0.5) * grid.dx();
                double cx = std::cos(mode.index_x * pi * x / grid.domain.lengths[0]);
                field.state.col(grid.cell_index(ix, iy)) +=
                    config.epsilon * mode.amplitude * cx * cy * mode.weights;
            }
        }
    }
    return field;
}

SimRow measure(const Field& field, const Eigen::VectorXd& u_inf, const Eigen::MatrixXd& Q,
               const Grid& grid, long clamps) {
    SimRow row;
    row.t = field.time;
    const int n_species = static_cast<int>(field.state.rows());
    const int n_cells = static_cast<int>(field.state.cols());
    const double vol = grid.cell_volume();
    double l2w = 0.0, linf = 0.0;
    double min_u = field.state(0, 0);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n_species);
    // Fixed sequential summation order: results are thread-count independent.
    for (int i = 0; i < n_species; ++i) {
        double sq = 0.0, sum = 0.0;
        for (int c = 0; c < n_cells; ++c) {
            double v = field.state(i, c) - u_inf[i];
            sq += v * v;
            sum += field.state(i, c);
            linf = std::max(linf, std::abs(v));
            min_u = std::min(min_u, field.state(i, c));
        }
        l2w += vol * sq / u_inf[i];
        mean[i] = sum / n_cells;
    }
    row.l2w_sq = l2w;
    row.linf = linf;
    row.min_u = min_u;
    row.mass = Q * mean;
    row.clamps = clamps;
    return row;
}

} // namespace

SimResult simulate(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                   const Eigen::MatrixXd& Q, const SimConfig& config) {
    if (config.dt <= 0.0 || config.t_end <= 0.0 || config.stride < 1)
        throw Error(ErrorKind::InvalidConfig, "t_end, dt, stride must be positive");
    if (config.epsilon < 0.0)
        throw Error(ErrorKind::InvalidConfig, "epsilon must be >= 0");
    Grid grid = build_grid(config.domain, config.cells);

    SimResult result;
    result.u_inf = u_inf;
    Field field = initial_field(net, u_inf, Q, grid, config);

    const long total_steps = static_cast<long>(std::floor(config.t_end / config.dt + 1e-9));
    long clamps = 0;
    result.rows.push_back(measure(field, u_inf, Q, grid, clamps));
    for (long step = 1; step <= total_steps; ++step) {
        clamps += imex_step(net, grid, config.diffusion, field, config.dt,
                            config.clamp_negatives, config.threads);
        if (step % config.stride == 0)
            result.rows.push_back(measure(field, u_inf, Q, grid, clamps));
    }
    result.final_field = std::move(field);
    result.total_clamps = clamps;
    result.warn = clamps > 0;
    return result;
}

} // namespace crnrd
