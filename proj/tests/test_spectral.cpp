#include <doctest.h>

#include "oracles.hpp"
#include "qhchain/eigh_tridiagonal.hpp"
#include "qhchain/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>

using namespace qhc;
using std::numbers::pi;

namespace {
double orth_error(const Eigen::MatrixXd& V) {
    return (V.transpose() * V - Eigen::MatrixXd::Identity(V.cols(), V.cols())).cwiseAbs().maxCoeff();
}
double residual(const Tridiag& T, const TridiagonalEigen<double>& e) {
    const Eigen::MatrixXd A = T.dense();
    return (A * e.eigenvectors - e.eigenvectors * e.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("clean free chain eigenvalues match 4 sin^2(k pi / 2n)") {
    const int n = 64;
    auto [Ap, Ar] = build_dynamics_operators(make_realization(Eigen::VectorXd::Ones(n)));
    for (auto method : {EigenMethod::ql, EigenMethod::bisection}) {
        const auto e = eigh_tridiagonal(Ap, method);
        double err = 0;
        for (int k = 0; k < n; ++k) {
            const double s = std::sin(k * pi / (2.0 * n));
            err = std::max(err, std::abs(e.eigenvalues[k] - 4 * s * s));
        }
        CHECK(err < 1e-12);
    }
}

TEST_CASE("eigensolver agrees with a dense symmetric solver") {
    for (int n : {1, 2, 5, 100, 300}) {
        Rng rng(n);
        Eigen::VectorXd d(n), e(std::max(n - 1, 0));
        for (int i = 0; i < n; ++i) d[i] = rng.uniform() * 4 - 2;
        for (int i = 0; i + 1 < n; ++i) e[i] = rng.uniform() - 0.5;
        const Tridiag T(d, e);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(T.dense());
        for (auto method : {EigenMethod::ql, EigenMethod::bisection}) {
            const auto r = eigh_tridiagonal(T, method);
            CHECK((r.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(orth_error(r.eigenvectors) < 1e-11);
            CHECK(residual(T, r) < 1e-11);
        }
    }
}

TEST_CASE("clusters and exact degeneracy keep an orthonormal basis") {
    // Direct sum of identical blocks: every eigenvalue has multiplicity 3.
    const int b = 7, n = 3 * b;
    Eigen::VectorXd d = Eigen::VectorXd::Constant(n, 2.0), e = Eigen::VectorXd::Constant(n - 1, -1.0);
    e[b - 1] = e[2 * b - 1] = 0.0;
    const Tridiag T(d, e);
    for (auto method : {EigenMethod::ql, EigenMethod::bisection}) {
        const auto r = eigh_tridiagonal(T, method);
        CHECK(orth_error(r.eigenvectors) < 1e-12);
        CHECK(residual(T, r) < 1e-12);
    }
    // Wilkinson W21+: pairs agree to ~1e-14.
    Eigen::VectorXd dw(21), ew = Eigen::VectorXd::Ones(20);
    for (int i = 0; i < 21; ++i) dw[i] = std::abs(10 - i);
    const auto w = eigh_tridiagonal_bisection(Tridiag(dw, ew));
    CHECK(orth_error(w.eigenvectors) < 1e-10);
    CHECK(residual(Tridiag(dw, ew), w) < 1e-10);
}

TEST_CASE("QL iteration cap falls back to bisection") {
    const auto r = oracle::random_chain(80, 9);
    auto [Ap, Ar] = build_dynamics_operators(r);
    const auto e = eigh_tridiagonal(Ap, EigenMethod::ql, 1);
    CHECK(e.used_fallback);
    CHECK(residual(Ap, e) < 1e-11);
}

TEST_CASE("eigensolver is generic in the scalar type") {
    Eigen::VectorXf d = Eigen::VectorXf::Constant(10, 2.0f), e = Eigen::VectorXf::Constant(9, -1.0f);
    const auto r = eigh_tridiagonal(TridiagonalOperator<float>(d, e));
    CHECK(r.eigenvalues[0] == doctest::Approx(4 * std::pow(std::sin(pi / 22), 2)).epsilon(1e-4));
    using LD = long double;
    Eigen::Matrix<LD, -1, 1> dl = Eigen::Matrix<LD, -1, 1>::Constant(10, 2), el = Eigen::Matrix<LD, -1, 1>::Constant(9, -1);
    const auto rl = eigh_tridiagonal(TridiagonalOperator<LD>(dl, el));
    CHECK(std::abs(static_cast<double>(rl.eigenvalues[9]) - 4 * std::pow(std::sin(10 * pi / 22), 2)) < 1e-15);
}

TEST_CASE("zero mode matches the closed form") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto r = oracle::random_chain(256, 1000 + s);
        const auto prof = oracle::smooth_profiles(256);
        auto [Ap, Ar] = build_gibbs_operators(r, prof);
        const ModeBasis b = build_mode_basis(Ap, r, prof);
        const Eigen::VectorXd mb = r.masses.cwiseQuotient(prof.beta);
        const Eigen::VectorXd ref = mb.cwiseSqrt() / std::sqrt(mb.sum());
        CHECK((b.momentum.col(0) - ref).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(b.frequencies[0] == 0.0);
    }
}

TEST_CASE("mode basis: eigen-pairs, orthonormality and the link relation") {
    for (int n : {2, 3, 64, 257}) {
        const auto r = oracle::random_chain(n, 31 * n);
        const auto prof = oracle::smooth_profiles(n);
        auto [Ap, Ar] = build_gibbs_operators(r, prof);
        const ModeBasis b = build_mode_basis(Ap, r, prof);
        const auto chk = check_mode_basis(b, Ap, Ar, r, prof.beta);
        CHECK(chk.residual < 1e-11);
        CHECK(chk.orthonormality < 1e-11);
        CHECK(chk.link < 1e-11);
        CHECK(chk.elongation_residual < 1e-11);
        // Independent check of the link against a dense B.
        const Eigen::MatrixXd B = oracle::dense_link(r.masses, prof.beta);
        for (Eigen::Index k = 1; k < n; ++k)
            CHECK((B * b.momentum.col(k) - b.frequencies[k] * b.elongation.col(k - 1)).cwiseAbs().maxCoeff() < 1e-11);
        // Frequencies are square roots of the dense spectrum.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ap.dense(), Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 1; k < n; ++k)
            CHECK(std::abs(b.frequencies[k] * b.frequencies[k] - es.eigenvalues()[k]) < 1e-11);
    }
}

TEST_CASE("link_apply equals the dense link operator") {
    const auto r = oracle::random_chain(30, 4);
    const auto prof = oracle::smooth_profiles(30);
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(30, -1.0, 2.0);
    CHECK((link_apply(r.masses, prof.beta, v) - oracle::dense_link(r.masses, prof.beta) * v).norm() < 1e-14);
    CHECK((link_matrix(r.masses, prof.beta) - oracle::dense_link(r.masses, prof.beta)).norm() < 1e-14);
    CHECK((link_apply(r.masses, Eigen::VectorXd(), v) -
           oracle::dense_link(r.masses, Eigen::VectorXd::Ones(30)) * v)
              .norm() < 1e-14);
}
