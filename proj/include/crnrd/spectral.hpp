#ifndef CRNRD_SPECTRAL_HPP
#define CRNRD_SPECTRAL_HPP

#include <Eigen/Dense>

#include "crnrd/domain.hpp"
#include "crnrd/network.hpp"

namespace crnrd {

struct LinearizedOperator {
    Eigen::MatrixXd L;       // N x N reaction linearization at u_inf
    Eigen::VectorXd u_inf;
    Eigen::VectorXd diffusion;
};

struct SpectralCertificate {
    double beta = 0.0;      // reaction gap on ker Q
    double poincare = 0.0;  // P(Omega): first nonzero Neumann eigenvalue
    double lambda = 0.0;    // certified gap min(P * min d, beta)
    Eigen::MatrixXd kerQ_basis; // N x (N - m), orthonormal columns
};

/// Linearization L_ij = sum_r k_r u_inf^{y_r} (y'_{r,i} - y_{r,i}) y_{r,j} / u_{j,inf}.
/// Requires u_inf complex balanced (residual <= 1e-10); throws NotAnEquilibrium.
LinearizedOperator linearize(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                             const Eigen::VectorXd& diffusion);

/// | sum_i (Lv)_i v_i/u_inf_i + 1/2 sum_r k_r u_inf^{y_r} (sum_i (y'-y)_i v_i/u_inf_i)^2 |.
/// Vanishes identically at complex balanced equilibria.
double quadratic_identity_residual(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                                   const Eigen::VectorXd& v);

/// Residuals of sum_r k_r u^{y_r} y_i y_j = sum_r k_r u^{y_r} y'_i y'_j for
/// i <= j, flattened row-major over the upper triangle.
Eigen::VectorXd moment_balance_residuals(const ReactionNetwork& net,
                                         const Eigen::VectorXd& u_inf);

/// Smallest eigenvalue of the reaction quadratic form restricted to ker Q,
/// in the weighted inner product sum v_i^2 / u_inf_i. Throws DegenerateKernel
/// when ker Q = {0} and NonpositiveGap when beta <= 1e-12.
double reaction_gap_beta(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                         const Eigen::MatrixXd& Q);

/// First nonzero Neumann Laplacian eigenvalue: (pi/L)^2 for an interval,
/// pi^2 / max(Lx, Ly)^2 for a rectangle. Throws UnsupportedDomain for dim >= 3.
double poincare_constant(const Domain& domain);

SpectralCertificate gap_certificate(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                                    const Eigen::VectorXd& diffusion,
                                    const Eigen::MatrixXd& Q, const Domain& domain);

/// Orthonormal basis of ker Q as columns (identity when Q has zero rows).
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& Q, int n);

} // namespace crnrd

#endif
