#ifndef CRNRD_EQUILIBRIA_HPP
#define CRNRD_EQUILIBRIA_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crnrd/network.hpp"
#include "crnrd/stoich.hpp"

namespace crnrd {

enum class BalanceClass { DetailedBalanced, ComplexBalancedOnly, NotComplexBalanced };

const char* to_string(BalanceClass c);

/// Per-complex relative residuals |in-flow - out-flow| / (1 + total flow).
Eigen::VectorXd check_complex_balance(const ReactionNetwork& net, const Eigen::VectorXd& u);

struct DetailedBalanceReport {
    bool all_paired = false;
    std::vector<std::pair<int, int>> pairs; // (forward, backward) reaction ids
    std::vector<int> unpaired;
    Eigen::VectorXd residuals;              // relative, one per pair
    double max_residual = 0.0;
};

DetailedBalanceReport check_detailed_balance(const ReactionNetwork& net,
                                             const Eigen::VectorXd& u);

struct ReferenceEquilibrium {
    std::optional<Eigen::VectorXd> u;  // strictly positive when present
    double log_residual = 0.0;         // residual of the log-linear solve
    double cb_residual = 0.0;          // max complex-balance residual at u
    std::string failure;               // empty on success
};

/// Positive complex balanced equilibrium via the Matrix-Tree route: a
/// strictly positive kernel vector of the weighted complex Laplacian per
/// linkage class, then a minimum-norm log-linear solve for ln u. Fails with
/// NotComplexBalanced when the network is not weakly reversible or the rate
/// constants do not balance (log residual > tol).
ReferenceEquilibrium reference_equilibrium(const ReactionNetwork& net,
                                           const StoichData& stoich,
                                           double log_residual_tol = 1e-8);

/// Project u_ref along the equilibrium manifold u_ref o exp(Q^T eta) onto the
/// compatibility class Q u = M, by damped Newton on the convex potential.
/// Throws NonpositiveMass / NoConvergence.
Eigen::VectorXd birch_project(const ReactionNetwork& net, const StoichData& stoich,
                              const Eigen::VectorXd& u_ref, const Eigen::VectorXd& mass,
                              int max_iterations = 200);

struct EquilibriumTest {
    bool is_equilibrium = false;
    double residual = 0.0; // ||f(u)||_inf
};

/// Pointwise equilibrium check, valid on the boundary as well.
EquilibriumTest is_equilibrium(const ReactionNetwork& net, const Eigen::VectorXd& u);

struct EquilibriumCertificate {
    BalanceClass classification = BalanceClass::NotComplexBalanced;
    std::optional<Eigen::VectorXd> u_ref;
    std::optional<Eigen::VectorXd> u_inf;
    Eigen::VectorXd mass;     // M = Q u_inf target
    Eigen::VectorXd eta;      // Birch projection coordinates
    double cb_residual = 0.0;
    double db_residual = 0.0;
    double mass_residual = 0.0;
    std::string failure;
};

/// Full classification + projection. When `mass` is absent the reference
/// equilibrium's own compatibility class is used (u_inf = u_ref).
EquilibriumCertificate certify_equilibrium(const ReactionNetwork& net,
                                           const StoichData& stoich,
                                           const std::optional<Eigen::VectorXd>& mass = {},
                                           double log_residual_tol = 1e-8);

} // namespace crnrd

#endif
