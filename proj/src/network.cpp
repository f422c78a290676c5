#include "crnrd/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace crnrd {

ComplexVec ComplexVec::from_rationals(const std::vector<Rat>& q) {
    ComplexVec c;
    c.coeffs.resize(static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i)
        c.coeffs[static_cast<Eigen::Index>(i)] = to_double(q[i]);
    c.exact = q;
    c.is_exact = true;
    return c;
}

ComplexVec ComplexVec::from_doubles(const Eigen::VectorXd& v) {
    ComplexVec c;
    c.coeffs = v;
    return c;
}

namespace {

void validate_complex(const ComplexVec& c, const std::string& what) {
    for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) {
        double y = c.coeffs[i];
        if (y != 0.0 && y < 1.0)
            throw Error(ErrorKind::InvalidConfig,
                        what + ": stoichiometric coefficient " + std::to_string(y) +
                            " outside {0} U [1,inf)");
    }
}

} // namespace

ReactionNetwork::ReactionNetwork(std::vector<Species> species,
                                 std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
    if (reactions_.empty())
        throw Error(ErrorKind::InvalidConfig, "network has no reactions");
    std::set<std::string> names;
    for (std::size_t i = 0; i < species_.size(); ++i) {
        species_[i].index = static_cast<int>(i);
        if (!names.insert(species_[i].name).second)
            throw Error(ErrorKind::InvalidConfig,
                        "duplicate species name " + species_[i].name);
    }
    const Eigen::Index n = static_cast<Eigen::Index>(species_.size());
    auto complex_id = [this](const ComplexVec& c) {
        for (std::size_t i = 0; i < complexes_.size(); ++i)
            if (complexes_[i] == c) return static_cast<int>(i);
        complexes_.push_back(c);
        return static_cast<int>(complexes_.size() - 1);
    };
    for (auto& r : reactions_) {
        if (r.reactant.coeffs.size() != n || r.product.coeffs.size() != n)
            throw Error(ErrorKind::InvalidConfig, "complex length != species count");
        validate_complex(r.reactant, "reactant");
        validate_complex(r.product, "product");
        if (r.rate <= 0.0)
            throw Error(ErrorKind::InvalidConfig, "rate constant must be positive");
        if (r.reactant == r.product)
            throw Error(ErrorKind::InvalidConfig, "reactant equals product");
        reactant_index_.push_back(complex_id(r.reactant));
        product_index_.push_back(complex_id(r.product));
    }
}

bool ReactionNetwork::has_exact_stoichiometry() const {
    for (const auto& r : reactions_)
        if (!r.reactant.is_exact || !r.product.is_exact) return false;
    return true;
}

double monomial(const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
    double p = 1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        double yi = y[i];
        if (yi == 0.0) continue; // 0^0 = 1 convention
        double ui = u[i];
        if (ui == 0.0) return 0.0; // 0^p = 0 for p >= 1
        p *= std::pow(ui, yi);
    }
    return p;
}

Eigen::VectorXd mass_action_rates(const ReactionNetwork& net, const Eigen::VectorXd& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] < 0.0)
            throw Error(ErrorKind::NegativeConcentration,
                        "negative concentration at species index " + std::to_string(i));
    Eigen::VectorXd flux(net.num_reactions());
    const auto& rs = net.reactions();
    for (int r = 0; r < net.num_reactions(); ++r)
        flux[r] = rs[r].rate * monomial(u, rs[r].reactant.coeffs);
    return flux;
}

Eigen::VectorXd reaction_rhs(const ReactionNetwork& net, const Eigen::VectorXd& u) {
    Eigen::VectorXd flux = mass_action_rates(net, u);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(net.num_species());
    const auto& rs = net.reactions();
    for (int r = 0; r < net.num_reactions(); ++r)
        f += flux[r] * (rs[r].product.coeffs - rs[r].reactant.coeffs);
    return f;
}

Eigen::MatrixXd rhs_jacobian(const ReactionNetwork& net, const Eigen::VectorXd& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] <= 0.0)
            throw Error(ErrorKind::NonpositiveConcentration,
                        "Jacobian requires strictly positive u");
    const int n = net.num_species();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    const auto& rs = net.reactions();
    for (const auto& rx : rs) {
        double flux = rx.rate * monomial(u, rx.reactant.coeffs);
        Eigen::VectorXd w = rx.product.coeffs - rx.reactant.coeffs;
        for (int j = 0; j < n; ++j) {
            double yj = rx.reactant.coeffs[j];
            if (yj == 0.0) continue;
            double scale = flux * yj / u[j];
            for (int i = 0; i < n; ++i) jac(i, j) += w[i] * scale;
        }
    }
    return jac;
}

double nonlinearity_order(const ReactionNetwork& net) {
    double mu = 0.0;
    for (const auto& c : net.complexes()) mu = std::max(mu, c.order());
    return mu;
}

double growth_constant(const ReactionNetwork& net) {
    double k_max = 0.0;
    for (int i = 0; i < net.num_species(); ++i) {
        double s = 0.0;
        for (const auto& rx : net.reactions())
            s += rx.rate * std::abs(rx.product.coeffs[i] - rx.reactant.coeffs[i]);
        k_max = std::max(k_max, s);
    }
    return k_max;
}

} // namespace crnrd
