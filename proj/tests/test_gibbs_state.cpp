#include <doctest.h>

#include "oracles.hpp"
#include "qhchain/gibbs_state.hpp"

using namespace qhc;

TEST_CASE("coth weight") {
    CHECK(coth_weight(0.0) == 1.0);
    CHECK(coth_weight(2.0) == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-15));
    CHECK(coth_weight(2.0, true) == 1.0);
    CHECK(std::abs(coth_weight(0.99e-4) - oracle::xcothx_of_square(0.99e-4 * 0.99e-4 / 4)) < 1e-16);
    CHECK_THROWS_AS(coth_weight(-1.0), std::domain_error);
}

TEST_CASE("initial means carry zero total momentum") {
    const int n = 100;
    const auto r = oracle::random_chain(n, 8);
    const auto prof = oracle::smooth_profiles(n);
    const InitialMeans m = initial_means(r, prof, 1.0);
    CHECK(std::abs(m.mean_p.sum()) < 1e-13);
    CHECK(m.mean_r == prof.rbar);
    // Uniform beta and constant pbar: the correction cancels the whole drift.
    DiscretizedProfiles flat = equilibrium_profiles(n, 2.0);
    flat.pbar.setConstant(0.7);
    CHECK(initial_means(r, flat, 1.0).mean_p.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("covariances equal the dense matrix-function formulas") {
    for (int n : {2, 5, 60}) {
        const auto r = oracle::random_chain(n, 40 + n);
        const auto prof = oracle::smooth_profiles(n);
        const GaussianState s = locally_gibbs_state(r, prof, 1.0);
        auto [Ap, Ar] = build_gibbs_operators(r, prof);
        const Eigen::MatrixXd Fp = oracle::dense_function(Ap.dense() / 4, oracle::xcothx_of_square);
        const Eigen::MatrixXd Fr = oracle::dense_function(Ar.dense() / 4, oracle::xcothx_of_square);
        const Eigen::VectorXd mb = r.masses.cwiseQuotient(prof.beta);
        const Eigen::VectorXd psi0 = mb.cwiseSqrt() / std::sqrt(mb.sum());
        const Eigen::VectorXd sm = mb.cwiseSqrt();
        const Eigen::MatrixXd Cpp = sm.asDiagonal() * (Fp - psi0 * psi0.transpose()) * sm.asDiagonal();
        const Eigen::VectorXd ib = prof.beta.head(n - 1).cwiseInverse().cwiseSqrt();
        const Eigen::MatrixXd Crr = ib.asDiagonal() * Fr * ib.asDiagonal();
        CHECK((s.C_pp - Cpp).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.C_rr - Crr).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(s.C_pr.cwiseAbs().maxCoeff() == 0.0);
        // Momentum covariance annihilates the total momentum direction.
        CHECK((s.C_pp * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("thermal energies: spectral, Taylor and covariance routes agree") {
    const int n = 150;
    const auto r = oracle::random_chain(n, 12);
    const auto prof = oracle::smooth_profiles(n);
    auto [Ap, Ar] = build_gibbs_operators(r, prof);
    const ModeBasis b = build_mode_basis(Ap, r, prof);
    std::vector<Eigen::Index> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    for (bool classical : {false, true}) {
        const GaussianState s = locally_gibbs_state(r, prof, 1.0, classical);
        const Eigen::VectorXd e_cov = site_thermal_energies(s, r);
        const Eigen::VectorXd e_sp = thermal_energies_spectral(b, r, prof, classical);
        const Eigen::VectorXd e_ty = thermal_energies_taylor(r, prof, all, classical);
        CHECK((e_cov - e_sp).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((e_ty - e_sp).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(site_thermal_energy(s, r, n) == doctest::Approx(e_cov[n - 1]));
    }
}

TEST_CASE("mode-sum diagonal equals matrix-function diagonal minus the zero mode") {
    const int n = 80;
    const auto r = oracle::random_chain(n, 21);
    const auto prof = oracle::smooth_profiles(n);
    auto [Ap, Ar] = build_gibbs_operators(r, prof);
    const ModeBasis b = build_mode_basis(Ap, r, prof);
    const Eigen::MatrixXd F = oracle::dense_function(Ap.dense() / 4, oracle::xcothx_of_square);
    for (Eigen::Index x = 0; x < n; ++x) {
        double s = 0;
        for (Eigen::Index k = 1; k < n; ++k) s += coth_weight(b.frequencies[k]) * b.momentum(x, k) * b.momentum(x, k);
        CHECK(std::abs(s / prof.beta[x] - (F(x, x) - b.momentum(x, 0) * b.momentum(x, 0)) / prof.beta[x]) < 1e-9);
    }
}

TEST_CASE("classical energies have the closed form and quantum energies dominate") {
    const int n = 64;
    const auto r = oracle::random_chain(n, 2);
    const auto prof = oracle::smooth_profiles(n);
    std::vector<Eigen::Index> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    const Eigen::VectorXd c = thermal_energies_taylor(r, prof, all, true);
    const Eigen::VectorXd q = thermal_energies_taylor(r, prof, all, false);
    const Eigen::VectorXd psi0 = zero_mode(r.masses, prof.beta);
    for (int x = 0; x < n; ++x) {
        const double ref = 0.5 * (1 - psi0[x] * psi0[x]) / prof.beta[x] + (x < n - 1 ? 0.5 / prof.beta[x] : 0.0);
        CHECK(c[x] == doctest::Approx(ref).epsilon(1e-14));
        CHECK(q[x] > c[x]);
    }
}

TEST_CASE("locality interval") {
    CHECK(locality_interval(5, 4, 10) == std::pair{3, 7});
    CHECK(locality_interval(1, 5, 10) == std::pair{1, 3});
    CHECK(locality_interval(10, 8, 10) == std::pair{6, 10});
    CHECK_THROWS(locality_interval(0, 2, 10));
}

TEST_CASE("path enumeration matches matrix powers") {
    const int n = 32;
    const auto r = oracle::random_chain(n, 6);
    auto [Ap, Ar] = build_gibbs_operators(r, oracle::smooth_profiles(n));
    const Eigen::MatrixXd A = Ap.dense();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k <= 8; ++k) {
        for (int x : {1, 2, 16, 31, 32}) {
            CHECK(std::abs(diag_power_oracle(Ap, x, k) - P(x - 1, x - 1)) < 1e-10 * std::max(1.0, std::abs(P(x - 1, x - 1))));
            CHECK(std::abs(diag_power(Ap, x, k) - P(x - 1, x - 1)) < 1e-10 * std::max(1.0, std::abs(P(x - 1, x - 1))));
        }
        P = P * A;
    }
}

TEST_CASE("diagonal of A^k ignores masses outside the locality window") {
    const int n = 32;
    const auto r = oracle::random_chain(n, 13);
    const auto prof = oracle::smooth_profiles(n);
    auto [Ap, Ar] = build_gibbs_operators(r, prof);
    for (int k = 1; k <= 8; ++k)
        for (int x : {4, 16, 29})
            for (int y = 1; y <= n; ++y) {
                if (std::abs(y - x) <= k / 2 + 1) continue;
                auto [Bp, Br] = build_gibbs_operators(perturb_mass(r, y, 0.3), prof);
                const double a = diag_power(Ap, x, k), b = diag_power(Bp, x, k);
                CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
            }
}
