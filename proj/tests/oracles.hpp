#pragma once

// Dense reference computations shared by the unit tests. Everything here goes
// through Eigen's dense solvers, never through the library's own eigensolver.

#include "qhchain/lattice_model.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace oracle {

inline Eigen::MatrixXd dense_link(const Eigen::VectorXd& m, const Eigen::VectorXd& beta) {
    const Eigen::Index n = m.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n - 1, n);
    for (Eigen::Index x = 0; x + 1 < n; ++x) {
        G(x, x) = -1;
        G(x, x + 1) = 1;
    }
    const Eigen::VectorXd D = (beta.array() / m.array()).sqrt();
    const Eigen::VectorXd w = beta.head(n - 1).cwiseSqrt();
    return w.asDiagonal() * G * D.asDiagonal();
}

// f applied to a symmetric matrix through Eigen's eigensolver.
template <typename F>
Eigen::MatrixXd dense_function(const Eigen::MatrixXd& A, F&& f) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    Eigen::VectorXd fv = es.eigenvalues().unaryExpr([&](double z) { return f(z); });
    return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().transpose();
}

// sqrt(z) coth(sqrt(z)) for z >= -small, by direct evaluation.
inline double xcothx_of_square(double z) {
    if (std::abs(z) < 1e-12) return 1.0 + z / 3.0;
    if (z > 0) {
        const double s = std::sqrt(z);
        return s / std::tanh(s);
    }
    const double s = std::sqrt(-z);
    return s / std::tan(s);
}

inline qhc::DisorderRealization random_chain(int n, std::uint64_t seed, double lo = 0.8, double hi = 1.2) {
    qhc::ChainSpec s;
    s.n = n;
    s.mass_law.m_min = lo;
    s.mass_law.m_max = hi;
    return qhc::sample_masses(s, seed);
}

inline qhc::DiscretizedProfiles smooth_profiles(int n) {
    qhc::ChainSpec s;
    s.n = n;
    s.beta = qhc::Profile::sine(0.5, 1.0, 1.0);
    s.pbar = qhc::Profile::cosine(0.5);
    s.rbar = qhc::Profile::sine(0.5);
    return qhc::discretize_profiles(s, n);
}

}  // namespace oracle
