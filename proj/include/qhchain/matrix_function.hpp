#pragma once

// Matrix functions of symmetric tridiagonal operators: spectral route and the
// recentered Taylor route for frak_f(z) = sqrt(z) coth(sqrt(z)).

#include "qhchain/eigh_tridiagonal.hpp"

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace qhc {

// sqrt(z) coth(sqrt(z)), entire except for poles at z = -k^2 pi^2 (k >= 1); frak_f(0) = 1.
double frak_f(double z);
std::complex<double> frak_f(std::complex<double> z);

template <typename Scalar, typename F>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_function_spectral(const TridiagonalOperator<Scalar>& T,
                                                                               F&& f) {
    const auto eig = eigh_tridiagonal(T);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fv(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(eig.eigenvalues[i]);
    const auto& V = eig.eigenvectors;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A = V * fv.asDiagonal() * V.transpose();
    return (A + A.transpose()) / Scalar(2);
}

// Coefficients of sqrt(z) coth(sqrt(z)) = sum_k a_k z^k, a_k = 2^{2k} B_{2k} / (2k)!, from exact Bernoulli numbers.
std::vector<double> taylor_xcothx_coeffs(int K);

// Coefficients of frak_f around z = alpha, by a Cauchy integral on |z - alpha| = alpha + pi^2/2.
struct RecenteredSeries {
    double alpha = 0;
    std::vector<double> coeffs;
    double contour_radius = 0;
    double contour_max = 0;  // max |frak_f| on the contour
};
RecenteredSeries recentered_coeffs(double alpha, int K);

// Same coefficients by binomial recentering of the z-series truncated at J terms.
// Only usable for small alpha; kept as a cross-check.
std::vector<double> recentered_coeffs_binomial(double alpha, int K, int J = 200);

double default_taylor_center(double beta_max, double m_min);

// Analytic bound on the discarded tail: M rho^{K+1} / (1 - rho), rho = r/(alpha+1),
// r a bound on ||T - alpha I||, M = max |frak_f| on |z - alpha| = alpha + 1.
double taylor_remainder_bound(const Tridiag& T, double alpha, int K);

struct TaylorResult {
    Eigen::MatrixXd value;
    double alpha = 0;
    int K = 0;
    double remainder_bound = 0;
};
TaylorResult matrix_function_taylor(const Tridiag& T, double alpha, int K);

// Order and center chosen so the Cauchy tail estimate is below tol.
struct TaylorPlan {
    RecenteredSeries series;
    int K = 0;
    double tail_estimate = 0;
};
TaylorPlan plan_taylor(const Tridiag& T, double tol = 1e-15, int K_max = 400);

// [p(T)]_xx for the truncated recentered series p, each site by local Horner
// recursion in O(K^2). Sites are 0-based.
Eigen::VectorXd taylor_diagonal(const Tridiag& T, const TaylorPlan& plan, const std::vector<Eigen::Index>& sites);
Eigen::VectorXd taylor_diagonal(const Tridiag& T, const TaylorPlan& plan);

}  // namespace qhc
