#ifndef CRNRD_NETWORK_HPP
#define CRNRD_NETWORK_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crnrd/errors.hpp"
#include "crnrd/rational.hpp"

namespace crnrd {

struct Species {
    std::string name;
    int index = 0; // 0-based position in the network's species ordering
};

/// A formal combination of species (the source or target of a reaction).
/// Coefficients are 0 or lie in [1, inf). When every coefficient is a finite
/// decimal (always the case for parsed networks) the exact rational values
/// are kept alongside the doubles.
struct ComplexVec {
    Eigen::VectorXd coeffs;
    std::vector<Rat> exact; // same length as coeffs when is_exact
    bool is_exact = false;

    static ComplexVec from_rationals(const std::vector<Rat>& q);
    static ComplexVec from_doubles(const Eigen::VectorXd& v);

    bool operator==(const ComplexVec& other) const {
        return coeffs == other.coeffs;
    }

    /// |y| = sum of coefficients.
    double order() const { return coeffs.sum(); }
    bool is_zero() const { return coeffs.isZero(0.0); }
};

struct Reaction {
    ComplexVec reactant;
    ComplexVec product;
    double rate = 0.0;
};

class ReactionNetwork {
public:
    ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions);

    int num_species() const { return static_cast<int>(species_.size()); }
    int num_reactions() const { return static_cast<int>(reactions_.size()); }
    int num_complexes() const { return static_cast<int>(complexes_.size()); }

    const std::vector<Species>& species() const { return species_; }
    const std::vector<Reaction>& reactions() const { return reactions_; }
    /// Deduplicated complexes in first-appearance order.
    const std::vector<ComplexVec>& complexes() const { return complexes_; }

    /// Index into complexes() of a reaction's reactant/product.
    int reactant_complex(int r) const { return reactant_index_[r]; }
    int product_complex(int r) const { return product_index_[r]; }

    /// True when every stoichiometric coefficient carries an exact rational.
    bool has_exact_stoichiometry() const;

private:
    std::vector<Species> species_;
    std::vector<Reaction> reactions_;
    std::vector<ComplexVec> complexes_;
    std::vector<int> reactant_index_;
    std::vector<int> product_index_;
};

/// Mass-action monomial u^y with the conventions 0^0 = 1 and 0^p = 0, p >= 1.
double monomial(const Eigen::VectorXd& u, const Eigen::VectorXd& y);

/// Reaction fluxes k_r * u^{y_r}. Throws NegativeConcentration.
Eigen::VectorXd mass_action_rates(const ReactionNetwork& net, const Eigen::VectorXd& u);

/// Mass-action right-hand side f_i(u) = sum_r k_r (y'_{r,i} - y_{r,i}) u^{y_r}.
Eigen::VectorXd reaction_rhs(const ReactionNetwork& net, const Eigen::VectorXd& u);

/// Jacobian df_i/du_j at strictly positive u. Throws NonpositiveConcentration.
Eigen::MatrixXd rhs_jacobian(const ReactionNetwork& net, const Eigen::VectorXd& u);

/// Highest order of nonlinearity: mu = max_{y in C} |y|.
double nonlinearity_order(const ReactionNetwork& net);

/// K = max_i sum_r k_r |y'_{r,i} - y_{r,i}|; gives |f_i(u)| <= K(|u|_inf^mu + 1).
double growth_constant(const ReactionNetwork& net);

} // namespace crnrd

#endif
