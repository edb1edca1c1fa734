#include "qhchain/spectral.hpp"

#include "qhchain/io.hpp"

#include <cmath>

namespace qhc {

namespace {
Eigen::VectorXd beta_or_one(const Eigen::VectorXd& beta, Eigen::Index n) {
    return beta.size() == 0 ? Eigen::VectorXd::Ones(n) : beta;
}
}  // namespace

Eigen::VectorXd link_apply(const Eigen::VectorXd& masses, const Eigen::VectorXd& beta, const Eigen::VectorXd& v) {
    const Eigen::Index n = masses.size();
    const Eigen::VectorXd b = beta_or_one(beta, n);
    const Eigen::VectorXd w = (b.array() / masses.array()).sqrt() * v.array();
    return b.head(n - 1).array().sqrt() * grad_plus(w).array();
}

Eigen::MatrixXd link_matrix(const Eigen::VectorXd& masses, const Eigen::VectorXd& beta) {
    const Eigen::Index n = masses.size();
    const Eigen::VectorXd b = beta_or_one(beta, n);
    Eigen::MatrixXd B = grad_plus_matrix(static_cast<int>(n));
    B = b.head(n - 1).array().sqrt().matrix().asDiagonal() * B;
    B = B * (b.array() / masses.array()).sqrt().matrix().asDiagonal();
    return B;
}

Eigen::VectorXd zero_mode(const Eigen::VectorXd& masses, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd b = beta_or_one(beta, masses.size());
    const Eigen::VectorXd w = masses.array() / b.array();
    return (w / w.sum()).array().sqrt();
}

namespace {

ModeBasis assemble(const Tridiag& A_p, const Eigen::VectorXd& masses, const Eigen::VectorXd& beta,
                   EigenMethod method) {
    const Eigen::Index n = A_p.dim();
    if (masses.size() != n) throw std::invalid_argument("build_mode_basis: operator/realization size mismatch");
    auto eig = eigh_tridiagonal(A_p, method);
    const double norm = std::max(1.0, A_p.norm_bound());
    if (std::abs(eig.eigenvalues[0]) > 1e-10 * norm)
        throw NumericalError("build_mode_basis: lowest eigenvalue " + std::to_string(eig.eigenvalues[0]) +
                             " is not the free-chain zero mode");

    ModeBasis basis;
    basis.used_fallback = eig.used_fallback;
    basis.frequencies.resize(n);
    basis.frequencies[0] = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        if (!(eig.eigenvalues[k] > 0.0))
            throw NumericalError("build_mode_basis: non-positive eigenvalue at index " + std::to_string(k));
        basis.frequencies[k] = std::sqrt(eig.eigenvalues[k]);
    }
    basis.momentum = std::move(eig.eigenvectors);
    basis.momentum.col(0) = zero_mode(masses, beta);

    // psi~^k = B psi^k / gamma_k, then renormalized.
    basis.elongation.resize(n - 1, n - 1);
    for (Eigen::Index k = 1; k < n; ++k) {
        Eigen::VectorXd v = link_apply(masses, beta, basis.momentum.col(k));
        v /= basis.frequencies[k];
        const double nv = v.norm();
        if (!(nv > 0.5 && nv < 2.0))
            throw NumericalError("build_mode_basis: gradient link lost normalization at mode " + std::to_string(k));
        basis.elongation.col(k - 1) = v / nv;
    }
    return basis;
}

}  // namespace

ModeBasis build_mode_basis(const Tridiag& A_p, const DisorderRealization& real, EigenMethod method) {
    return assemble(A_p, real.masses, Eigen::VectorXd(), method);
}

ModeBasis build_mode_basis(const Tridiag& A_p, const DisorderRealization& real, const DiscretizedProfiles& prof,
                           EigenMethod method) {
    return assemble(A_p, real.masses, prof.beta, method);
}

ModeBasisCheck check_mode_basis(const ModeBasis& basis, const Tridiag& A_p, const Tridiag& A_r,
                                const DisorderRealization& real, const Eigen::VectorXd& beta) {
    ModeBasisCheck c;
    const Eigen::Index n = basis.dim();
    const double np = std::max(1.0, A_p.norm_bound());
    const double nr = std::max(1.0, A_r.norm_bound());
    for (Eigen::Index k = 0; k < n; ++k) {
        const double g2 = basis.frequencies[k] * basis.frequencies[k];
        const Eigen::VectorXd psi = basis.momentum.col(k);
        c.residual = std::max(c.residual, (A_p.apply(psi) - g2 * psi).norm() / np);
        if (k >= 1) {
            const Eigen::VectorXd t = basis.elongation.col(k - 1);
            c.elongation_residual = std::max(c.elongation_residual, (A_r.apply(t) - g2 * t).norm() / nr);
            c.link = std::max(c.link, (basis.frequencies[k] * t - link_apply(real.masses, beta, psi)).cwiseAbs().maxCoeff());
        }
    }
    const Eigen::MatrixXd Ip = basis.momentum.transpose() * basis.momentum - Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd Ir =
        basis.elongation.transpose() * basis.elongation - Eigen::MatrixXd::Identity(n - 1, n - 1);
    c.orthonormality = std::max(Ip.cwiseAbs().maxCoeff(), Ir.cwiseAbs().maxCoeff());
    return c;
}

void write_mode_basis_csv(const std::string& path, const ModeBasis& basis) {
    CsvWriter out(path, {"k", "frequency", "x", "momentum_mode", "elongation_mode"});
    const Eigen::Index n = basis.dim();
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index x = 0; x < n; ++x) {
            const double el = (k >= 1 && x < n - 1) ? basis.elongation(x, k - 1) : 0.0;
            out.row(static_cast<double>(k), basis.frequencies[k], static_cast<double>(x + 1), basis.momentum(x, k), el);
        }
    out.close();
}

}  // namespace qhc
