#pragma once

#include "qhchain/eigh_tridiagonal.hpp"
#include "qhchain/lattice_model.hpp"

#include <Eigen/Dense>

namespace qhc {

// Paired mode families of a chain operator A_p = B^T B, A_r = B B^T with
// B = beta°^{1/2} grad_plus M_beta^{-1/2}.
struct ModeBasis {
    Eigen::VectorXd frequencies;  // gamma_0 = 0 <= gamma_1 <= ... (length n)
    Eigen::MatrixXd momentum;     // n x n, column k = psi^k
    Eigen::MatrixXd elongation;   // (n-1) x (n-1), column k-1 = psi~^k for k = 1..n-1
    bool used_fallback = false;

    Eigen::Index dim() const { return frequencies.size(); }
};

// B v for the link operator; beta empty means beta = 1.
Eigen::VectorXd link_apply(const Eigen::VectorXd& masses, const Eigen::VectorXd& beta, const Eigen::VectorXd& v);
Eigen::MatrixXd link_matrix(const Eigen::VectorXd& masses, const Eigen::VectorXd& beta);

// Closed-form zero mode (sum m/beta)^{-1/2} M_beta^{1/2} 1.
Eigen::VectorXd zero_mode(const Eigen::VectorXd& masses, const Eigen::VectorXd& beta);

// Modes of A_p^0 (beta = 1).
ModeBasis build_mode_basis(const Tridiag& A_p, const DisorderRealization& real,
                           EigenMethod method = EigenMethod::ql);
// Modes of A_p^beta.
ModeBasis build_mode_basis(const Tridiag& A_p, const DisorderRealization& real, const DiscretizedProfiles& prof,
                           EigenMethod method = EigenMethod::ql);

struct ModeBasisCheck {
    double residual = 0;            // max_k ||A_p psi - gamma^2 psi|| / max(1, ||A_p||)
    double orthonormality = 0;      // max over both families of |V^T V - I|
    double link = 0;                // max_k |gamma_k psi~^k - B psi^k|
    double elongation_residual = 0; // max_k ||A_r psi~ - gamma^2 psi~|| / max(1, ||A_r||)
};
ModeBasisCheck check_mode_basis(const ModeBasis& basis, const Tridiag& A_p, const Tridiag& A_r,
                                const DisorderRealization& real, const Eigen::VectorXd& beta);

// Mode-basis CSV dump: one row per (k, x) for the momentum family.
void write_mode_basis_csv(const std::string& path, const ModeBasis& basis);

}  // namespace qhc
