#ifndef CRNRD_SOLVER_HPP
#define CRNRD_SOLVER_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crnrd/domain.hpp"
#include "crnrd/network.hpp"

namespace crnrd {

/// Cell-centered grid on an interval or axis-aligned rectangle,
/// x_k = (k + 1/2) dx per axis.
struct Grid {
    Domain domain;
    std::array<int, 2> cells{0, 1};

    int nx() const { return cells[0]; }
    int ny() const { return domain.dim == 2 ? cells[1] : 1; }
    int total_cells() const { return nx() * ny(); }
    double dx() const { return domain.lengths[0] / cells[0]; }
    double dy() const { return domain.lengths[1] / cells[1]; }
    double cell_volume() const { return domain.dim == 2 ? dx() * dy() : dx(); }
    int cell_index(int ix, int iy) const { return iy * nx() + ix; }
};

Grid build_grid(const Domain& domain, const std::array<int, 2>& cells);

/// Concentration state: one row per species, one column per cell.
struct Field {
    Eigen::MatrixXd state;
    double time = 0.0;
};

/// One cosine perturbation mode: eps * amplitude * weights_i *
/// cos(jx pi x / Lx) * cos(jy pi y / Ly).
struct PerturbationMode {
    Eigen::VectorXd weights;
    int index_x = 0;
    int index_y = 0;
    double amplitude = 1.0;
};

struct SimConfig {
    std::string network_path;
    Eigen::VectorXd diffusion;
    Domain domain;
    std::array<int, 2> cells{0, 1};
    double epsilon = 0.0;
    std::vector<PerturbationMode> modes;
    double t_end = 1.0;
    double dt = 1e-3;
    int stride = 1;
    bool clamp_negatives = true;
    std::optional<Eigen::VectorXd> mass; // compatibility class; default Q u_ref
    int threads = 1;
};

struct SimRow {
    double t = 0.0;
    double l2w_sq = 0.0;       // sum_i ||u_i - u_inf_i||_2^2 / u_inf_i
    double linf = 0.0;         // max over species and cells of |u - u_inf|
    Eigen::VectorXd mass;      // Q u_bar
    double min_u = 0.0;
    long clamps = 0;           // cumulative
};

struct SimResult {
    std::vector<SimRow> rows;
    Field final_field;
    Eigen::VectorXd u_inf;
    long total_clamps = 0;
    bool warn = false;         // clamps > 0
};

/// One IMEX Euler step: explicit mass-action reaction, then per-species
/// implicit Neumann diffusion solves (tridiagonal in 1D, alternating-direction
/// sweeps in 2D). Negative entries after the reaction substep are clamped to 0
/// when requested; the clamp count is returned. Throws NonFiniteState on
/// divergence.
long imex_step(const ReactionNetwork& net, const Grid& grid,
               const Eigen::VectorXd& diffusion, Field& field, double dt,
               bool clamp_negatives = true, int threads = 1);

/// Integrate to t_end from u_inf + eps * modes, recording the norm and
/// conservation series every `stride` steps. Deterministic for any thread
/// count (fixed summation order).
SimResult simulate(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                   const Eigen::MatrixXd& Q, const SimConfig& config);

} // namespace crnrd

#endif
