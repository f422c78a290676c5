#ifndef CRNRD_STOICH_HPP
#define CRNRD_STOICH_HPP

#include <vector>

#include <Eigen/Dense>

#include "crnrd/network.hpp"

namespace crnrd {

struct MassVector {
    Eigen::VectorXd values;      // M = Q * u0_mean
    bool nonpositive_warning = false;
};

/// Stoichiometric structure of a network: reaction-vector matrix W, an exact
/// conservation basis Q with Q W = 0, and the complex-graph decomposition.
struct StoichData {
    Eigen::MatrixXd W;           // N x R, column r = y'_r - y_r
    Eigen::MatrixXd Q;           // m x N, rows span ker(W^T)
    int m = 0;                   // codimension of range W
    int rank_W = 0;
    bool exact_conservation = true; // false when the SVD fallback was used

    std::vector<std::vector<int>> linkage_classes;   // partitions of complex ids
    std::vector<std::vector<int>> strong_components;
    bool weakly_reversible = false;
    int deficiency = 0;
};

Eigen::MatrixXd wegscheider_matrix(const ReactionNetwork& net);

/// Basis of ker(W^T) as rows of an m x N matrix. Exact rational elimination
/// when the network carries exact stoichiometry, SVD fallback otherwise
/// (rank tolerance 1e-10 * sigma_max). Rows are canonicalized: first nonzero
/// entry positive, nonnegative representatives preferred.
Eigen::MatrixXd conservation_basis(const ReactionNetwork& net, bool* exact = nullptr);

MassVector mass_vector(const Eigen::MatrixXd& Q, const Eigen::VectorXd& u0_mean);

/// Full analysis: W, Q, linkage classes, strong components, weak
/// reversibility, deficiency = |C| - #linkage - rank W.
StoichData analyze_stoichiometry(const ReactionNetwork& net);

} // namespace crnrd

#endif
