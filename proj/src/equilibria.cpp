#include "crnrd/equilibria.hpp"

#include <cmath>
#include <limits>

namespace crnrd {

const char* to_string(BalanceClass c) {
    switch (c) {
        case BalanceClass::DetailedBalanced: return "DetailedBalanced";
        case BalanceClass::ComplexBalancedOnly: return "ComplexBalancedOnly";
        case BalanceClass::NotComplexBalanced: return "NotComplexBalanced";
    }
    return "Unknown";
}

Eigen::VectorXd check_complex_balance(const ReactionNetwork& net, const Eigen::VectorXd& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] <= 0.0)
            throw Error(ErrorKind::NonpositiveConcentration,
                        "complex balance check requires u > 0");
    Eigen::VectorXd flux = mass_action_rates(net, u);
    Eigen::VectorXd outflow = Eigen::VectorXd::Zero(net.num_complexes());
    Eigen::VectorXd inflow = Eigen::VectorXd::Zero(net.num_complexes());
    for (int r = 0; r < net.num_reactions(); ++r) {
        outflow[net.reactant_complex(r)] += flux[r];
        inflow[net.product_complex(r)] += flux[r];
    }
    Eigen::VectorXd residual(net.num_complexes());
    for (int c = 0; c < net.num_complexes(); ++c)
        residual[c] = std::abs(outflow[c] - inflow[c]) / (1.0 + outflow[c] + inflow[c]);
    return residual;
}

DetailedBalanceReport check_detailed_balance(const ReactionNetwork& net,
                                             const Eigen::VectorXd& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] <= 0.0)
            throw Error(ErrorKind::NonpositiveConcentration,
                        "detailed balance check requires u > 0");
    DetailedBalanceReport rep;
    const int nr = net.num_reactions();
    std::vector<bool> used(nr, false);
    for (int r = 0; r < nr; ++r) {
        if (used[r]) continue;
        int reverse = -1;
        for (int s = r + 1; s < nr; ++s) {
            if (used[s]) continue;
            if (net.reactant_complex(s) == net.product_complex(r) &&
                net.product_complex(s) == net.reactant_complex(r)) {
                reverse = s;
                break;
            }
        }
        if (reverse < 0) {
            rep.unpaired.push_back(r);
        } else {
            used[r] = used[reverse] = true;
            rep.pairs.emplace_back(r, reverse);
        }
    }
    rep.all_paired = rep.unpaired.empty();
    rep.residuals.resize(static_cast<Eigen::Index>(rep.pairs.size()));
    const auto& rs = net.reactions();
    for (std::size_t p = 0; p < rep.pairs.size(); ++p) {
        auto [f, b] = rep.pairs[p];
        double fwd = rs[f].rate * monomial(u, rs[f].reactant.coeffs);
        double bwd = rs[b].rate * monomial(u, rs[b].reactant.coeffs);
        rep.residuals[static_cast<Eigen::Index>(p)] =
            std::abs(fwd - bwd) / (1.0 + fwd + bwd);
    }
    rep.max_residual = rep.residuals.size() ? rep.residuals.maxCoeff() : 0.0;
    if (!rep.all_paired) rep.max_residual = std::numeric_limits<double>::infinity();
    return rep;
}

namespace {

// Strictly positive kernel vector of the weighted complex Laplacian restricted
// to one (strongly connected) linkage class, via LU on the reduced system.
Eigen::VectorXd laplacian_kernel(const ReactionNetwork& net, const std::vector<int>& cls) {
    const int n = static_cast<int>(cls.size());
    std::vector<int> local(net.num_complexes(), -1);
    for (int i = 0; i < n; ++i) local[cls[i]] = i;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    const auto& rs = net.reactions();
    for (int r = 0; r < net.num_reactions(); ++r) {
        int src = local[net.reactant_complex(r)];
        int dst = local[net.product_complex(r)];
        if (src < 0) continue;
        lap(src, src) -= rs[r].rate;
        lap(dst, src) += rs[r].rate;
    }
    Eigen::VectorXd kernel(n);
    if (n == 1) {
        kernel[0] = 1.0;
        return kernel;
    }
    // Fix the last component to 1; the first n-1 balance equations determine
    // the rest (the Laplacian of a strongly connected class has rank n-1).
    Eigen::MatrixXd reduced = lap.topLeftCorner(n - 1, n - 1);
    Eigen::VectorXd rhs = -lap.topRightCorner(n - 1, 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
    if (!lu.isInvertible())
        throw Error(ErrorKind::NumericalFailure, "reduced complex Laplacian is singular");
    kernel.head(n - 1) = lu.solve(rhs);
    kernel[n - 1] = 1.0;
    for (int i = 0; i < n; ++i)
        if (!(kernel[i] > 0.0))
            throw Error(ErrorKind::NumericalFailure,
                        "complex Laplacian kernel is not strictly positive");
    return kernel;
}

// True when every reaction preserves total stoichiometric weight, i.e.
// 1^T W = 0. Then |y| is constant on each linkage class and a uniform
// rescaling of u stays on the equilibrium manifold.
bool conserves_total_order(const ReactionNetwork& net) {
    for (const auto& rx : net.reactions())
        if (std::abs(rx.product.coeffs.sum() - rx.reactant.coeffs.sum()) > 1e-12)
            return false;
    return true;
}

} // namespace

ReferenceEquilibrium reference_equilibrium(const ReactionNetwork& net,
                                           const StoichData& stoich,
                                           double log_residual_tol) {
    ReferenceEquilibrium out;
    if (!stoich.weakly_reversible) {
        out.failure = "not weakly reversible";
        return out;
    }
    const int n = net.num_species();
    const int n_classes = static_cast<int>(stoich.linkage_classes.size());

    // Kernel vector rho over all complexes, one Laplacian per linkage class.
    Eigen::VectorXd rho(net.num_complexes());
    std::vector<int> class_of(net.num_complexes(), -1);
    for (int l = 0; l < n_classes; ++l) {
        const auto& cls = stoich.linkage_classes[l];
        Eigen::VectorXd kernel = laplacian_kernel(net, cls);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            rho[cls[i]] = kernel[static_cast<Eigen::Index>(i)];
            class_of[cls[i]] = l;
        }
    }

    // Log-linear system: y . x - s_l = ln rho_y for each complex y.
    const int nc = net.num_complexes();
    Eigen::MatrixXd a(nc, n + n_classes);
    Eigen::VectorXd b(nc);
    for (int c = 0; c < nc; ++c) {
        a.row(c).head(n) = net.complexes()[c].coeffs.transpose();
        a.row(c).tail(n_classes).setZero();
        a(c, n + class_of[c]) = -1.0;
        b[c] = std::log(rho[c]);
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    // The solution is unique up to the m-dimensional manifold directions
    // (plus the shifts already in the unknowns); more degeneracy than that
    // signals a malformed system.
    double sigma_max = svd.singularValues()[0];
    int rank = static_cast<int>(
        (svd.singularValues().array() > 1e-12 * sigma_max).count());
    int expected_rank = std::min(nc, n + n_classes - stoich.m);
    if (rank < expected_rank)
        throw Error(ErrorKind::NumericalFailure,
                    "log-linear system rank-degenerate beyond linkage-class shifts");
    Eigen::VectorXd z = svd.solve(b);
    out.log_residual = (a * z - b).lpNorm<Eigen::Infinity>();
    if (out.log_residual > log_residual_tol) {
        out.failure = "rate constants are not complex balancing (log residual " +
                      std::to_string(out.log_residual) + ")";
        return out;
    }

    Eigen::VectorXd u = z.head(n).array().exp();
    if (conserves_total_order(net)) u /= u.maxCoeff();
    out.cb_residual = check_complex_balance(net, u).maxCoeff();
    if (out.cb_residual > 1e-10) {
        out.failure = "complex balance verification failed (residual " +
                      std::to_string(out.cb_residual) + ")";
        return out;
    }
    out.u = u;
    return out;
}

Eigen::VectorXd birch_project(const ReactionNetwork& net, const StoichData& stoich,
                              const Eigen::VectorXd& u_ref, const Eigen::VectorXd& mass,
                              int max_iterations) {
    (void)net;
    const int m = stoich.m;
    if (m == 0) return u_ref;
    for (Eigen::Index j = 0; j < mass.size(); ++j)
        if (mass[j] <= 0.0)
            throw Error(ErrorKind::NonpositiveMass,
                        "Birch projection requires componentwise positive mass");

    const Eigen::MatrixXd& q = stoich.Q;
    // phi(eta) = sum_i u_ref_i exp((Q^T eta)_i) - M . eta is strictly convex
    // with gradient Q u(eta) - M and Hessian Q diag(u) Q^T.
    auto state = [&](const Eigen::VectorXd& eta) -> Eigen::VectorXd {
        return u_ref.array() * (q.transpose() * eta).array().exp();
    };
    auto objective = [&](const Eigen::VectorXd& eta) {
        return state(eta).sum() - mass.dot(eta);
    };

    Eigen::VectorXd eta = Eigen::VectorXd::Zero(m);
    double tol = 1e-10 * (1.0 + mass.lpNorm<Eigen::Infinity>());
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd u = state(eta);
        Eigen::VectorXd grad = q * u - mass;
        if (grad.lpNorm<Eigen::Infinity>() <= tol) return u;
        Eigen::MatrixXd hess = q * u.asDiagonal() * q.transpose();
        Eigen::VectorXd step = hess.ldlt().solve(-grad);
        // Halve the step until the convex objective decreases.
        double phi0 = objective(eta);
        double t = 1.0;
        Eigen::VectorXd next = eta + step;
        int halvings = 0;
        while (objective(next) > phi0 && halvings++ < 60) {
            t *= 0.5;
            next = eta + t * step;
        }
        eta = next;
    }
    Eigen::VectorXd u = state(eta);
    double residual = (q * u - mass).lpNorm<Eigen::Infinity>();
    if (residual <= tol) return u;
    throw Error(ErrorKind::NoConvergence,
                "Birch projection did not converge after " +
                    std::to_string(max_iterations) +
                    " iterations (mass residual " + std::to_string(residual) + ")");
}

EquilibriumTest is_equilibrium(const ReactionNetwork& net, const Eigen::VectorXd& u) {
    EquilibriumTest t;
    Eigen::VectorXd f = reaction_rhs(net, u);
    t.residual = f.lpNorm<Eigen::Infinity>();
    double mu = nonlinearity_order(net);
    double scale = growth_constant(net) *
                   (std::pow(u.lpNorm<Eigen::Infinity>(), mu) + 1.0);
    t.is_equilibrium = t.residual <= 1e-12 * (1.0 + scale);
    return t;
}

EquilibriumCertificate certify_equilibrium(const ReactionNetwork& net,
                                           const StoichData& stoich,
                                           const std::optional<Eigen::VectorXd>& mass,
                                           double log_residual_tol) {
    EquilibriumCertificate cert;
    ReferenceEquilibrium ref = reference_equilibrium(net, stoich, log_residual_tol);
    if (!ref.u) {
        cert.failure = ref.failure;
        return cert;
    }
    cert.u_ref = ref.u;
    DetailedBalanceReport db = check_detailed_balance(net, *ref.u);
    cert.db_residual = db.max_residual;
    cert.classification = (db.all_paired && db.max_residual <= 1e-10)
                              ? BalanceClass::DetailedBalanced
                              : BalanceClass::ComplexBalancedOnly;

    cert.mass = mass ? *mass : Eigen::VectorXd(stoich.Q * *ref.u);
    if (mass) {
        Eigen::VectorXd u_inf = birch_project(net, stoich, *ref.u, *mass);
        cert.eta = Eigen::VectorXd::Zero(stoich.m); // reported below when m > 0
        if (stoich.m > 0) {
            // Recover eta from ln(u_inf / u_ref) = Q^T eta (least squares).
            Eigen::VectorXd logratio =
                (u_inf.array() / ref.u->array()).log().matrix();
            cert.eta = stoich.Q.transpose()
                           .colPivHouseholderQr()
                           .solve(logratio);
        }
        cert.u_inf = u_inf;
    } else {
        cert.u_inf = ref.u;
        cert.eta = Eigen::VectorXd::Zero(stoich.m);
    }
    cert.cb_residual = check_complex_balance(net, *cert.u_inf).maxCoeff();
    cert.mass_residual = (stoich.Q * *cert.u_inf - cert.mass).lpNorm<Eigen::Infinity>();
    return cert;
}

} // namespace crnrd
