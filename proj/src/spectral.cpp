#include "crnrd/spectral.hpp"

#include <cmath>
#include <numbers>

#include "crnrd/equilibria.hpp"

namespace crnrd {

namespace {

void require_complex_balanced(const ReactionNetwork& net, const Eigen::VectorXd& u_inf) {
    for (Eigen::Index i = 0; i < u_inf.size(); ++i)
        if (u_inf[i] <= 0.0)
            throw Error(ErrorKind::NotAnEquilibrium, "u_inf must be strictly positive");
    double residual = check_complex_balance(net, u_inf).maxCoeff();
    if (residual > 1e-10)
        throw Error(ErrorKind::NotAnEquilibrium,
                    "u_inf is not complex balanced (residual " +
                        std::to_string(residual) + ")");
}

} // namespace

LinearizedOperator linearize(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                             const Eigen::VectorXd& diffusion) {
    require_complex_balanced(net, u_inf);
    for (Eigen::Index i = 0; i < diffusion.size(); ++i)
        if (diffusion[i] <= 0.0)
            throw Error(ErrorKind::InvalidConfig, "diffusion coefficients must be positive");
    LinearizedOperator op;
    op.u_inf = u_inf;
    op.diffusion = diffusion;
    op.L = rhs_jacobian(net, u_inf);
    return op;
}

double quadratic_identity_residual(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                                   const Eigen::VectorXd& v) {
    require_complex_balanced(net, u_inf);
    Eigen::MatrixXd l = rhs_jacobian(net, u_inf);
    Eigen::VectorXd lv = l * v;
    double lhs = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) lhs += lv[i] * v[i] / u_inf[i];
    double quad = 0.0;
    for (const auto& rx : net.reactions()) {
        double flux = rx.rate * monomial(u_inf, rx.reactant.coeffs);
        double s = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            s += (rx.product.coeffs[i] - rx.reactant.coeffs[i]) * v[i] / u_inf[i];
        quad += flux * s * s;
    }
    return std::abs(lhs + 0.5 * quad);
}

Eigen::VectorXd moment_balance_residuals(const ReactionNetwork& net,
                                         const Eigen::VectorXd& u_inf) {
    // No complex-balance guard here: the residuals double as the negative
    // control that detects broken balance, so they must be computable at
    // arbitrary positive points.
    for (Eigen::Index i = 0; i < u_inf.size(); ++i)
        if (u_inf[i] <= 0.0)
            throw Error(ErrorKind::NotAnEquilibrium, "u_inf must be strictly positive");
    const int n = net.num_species();
    Eigen::VectorXd residuals(n * (n + 1) / 2);
    int idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double lhs = 0.0, rhs = 0.0;
            for (const auto& rx : net.reactions()) {
                double flux = rx.rate * monomial(u_inf, rx.reactant.coeffs);
                lhs += flux * rx.reactant.coeffs[i] * rx.reactant.coeffs[j];
                rhs += flux * rx.product.coeffs[i] * rx.product.coeffs[j];
            }
            residuals[idx++] = std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
        }
    }
    return residuals;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& Q, int n) {
    if (Q.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Q);
    Eigen::MatrixXd raw = lu.kernel();
    if (raw.cols() == 1 && raw.isZero(0.0)) return Eigen::MatrixXd(n, 0);
    // Orthonormalize for the symmetric pencil.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd thin_q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, raw.cols());
    return thin_q;
}

double reaction_gap_beta(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                         const Eigen::MatrixXd& Q) {
    require_complex_balanced(net, u_inf);
    const int n = net.num_species();
    Eigen::MatrixXd z = kernel_basis(Q, n);
    if (z.cols() == 0)
        throw Error(ErrorKind::DegenerateKernel, "ker Q is trivial (N = m)");

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (const auto& rx : net.reactions()) {
        double flux = rx.rate * monomial(u_inf, rx.reactant.coeffs);
        Eigen::VectorXd w =
            (rx.product.coeffs - rx.reactant.coeffs).array() / u_inf.array();
        b += 0.5 * flux * w * w.transpose();
    }
    Eigen::MatrixXd d_inv = u_inf.cwiseInverse().asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        z.transpose() * b * z, z.transpose() * d_inv * z);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NumericalFailure, "generalized eigensolve failed");
    double beta = solver.eigenvalues().minCoeff();
    if (beta <= 1e-12)
        throw Error(ErrorKind::NonpositiveGap,
                    "computed reaction gap is not positive: " + std::to_string(beta));
    return beta;
}

double poincare_constant(const Domain& domain) {
    constexpr double pi = std::numbers::pi;
    if (domain.dim == 1) {
        if (domain.lengths[0] <= 0.0)
            throw Error(ErrorKind::UnsupportedDomain, "interval length must be positive");
        return (pi / domain.lengths[0]) * (pi / domain.lengths[0]);
    }
    if (domain.dim == 2) {
        if (domain.lengths[0] <= 0.0 || domain.lengths[1] <= 0.0)
            throw Error(ErrorKind::UnsupportedDomain, "rectangle sides must be positive");
        double slow = std::max(domain.lengths[0], domain.lengths[1]);
        return pi * pi / (slow * slow);
    }
    throw Error(ErrorKind::UnsupportedDomain,
                "only intervals and rectangles are supported");
}

SpectralCertificate gap_certificate(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                                    const Eigen::VectorXd& diffusion,
                                    const Eigen::MatrixXd& Q, const Domain& domain) {
    SpectralCertificate cert;
    cert.beta = reaction_gap_beta(net, u_inf, Q);
    cert.poincare = poincare_constant(domain);
    cert.kerQ_basis = kernel_basis(Q, net.num_species());
    cert.lambda = std::min(cert.poincare * diffusion.minCoeff(), cert.beta);
    return cert;
}

} // namespace crnrd
