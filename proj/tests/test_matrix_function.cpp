#include <doctest.h>

#include "oracles.hpp"
#include "qhchain/matrix_function.hpp"

#include <numbers>

using namespace qhc;
using std::numbers::pi;

TEST_CASE("frak_f against direct evaluation") {
    CHECK(frak_f(0.0) == 1.0);
    CHECK(frak_f(1.0) == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-15));
    CHECK(frak_f(4.0) == doctest::Approx(2.0 / std::tanh(2.0)).epsilon(1e-15));
    CHECK(frak_f(-1.0) == doctest::Approx(1.0 / std::tan(1.0)).epsilon(1e-15));
    // Continuity across the series switch.
    for (double z : {-1.1e-6, -0.9e-6, 0.9e-6, 1.1e-6})
        CHECK(std::abs(frak_f(z) - oracle::xcothx_of_square(z)) < 1e-15);
    const std::complex<double> zc(2.0, 0.0);
    CHECK(std::abs(frak_f(zc) - frak_f(2.0)) < 1e-15);
}

TEST_CASE("z-series coefficients from exact Bernoulli numbers") {
    const auto a = taylor_xcothx_coeffs(6);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(1.0 / 3).epsilon(1e-16));
    CHECK(a[2] == doctest::Approx(-1.0 / 45).epsilon(1e-16));
    CHECK(a[3] == doctest::Approx(2.0 / 945).epsilon(1e-16));
    CHECK(a[4] == doctest::Approx(-1.0 / 4725).epsilon(1e-16));
    CHECK(a[5] == doctest::Approx(2.0 / 93555).epsilon(1e-16));
    // Radius of convergence pi^2: a_{k+1}/a_k -> -1/pi^2.
    const auto b = taylor_xcothx_coeffs(120);
    CHECK(b[120] / b[119] == doctest::Approx(-1.0 / (pi * pi)).epsilon(1e-12));
    double s = 0, p = 1;
    for (double c : b) s += c * p, p *= 0.5;
    CHECK(s == doctest::Approx(frak_f(0.5)).epsilon(1e-15));
    CHECK_THROWS(taylor_xcothx_coeffs(201));
}

TEST_CASE("contour recentering matches binomial recentering at small alpha") {
    for (double alpha : {0.0, 0.25, 1.0}) {
        const auto c = recentered_coeffs(alpha, 25);
        const auto b = recentered_coeffs_binomial(alpha, 25);
        for (int k = 0; k <= 25; ++k) CHECK(std::abs(c.coeffs[k] - b[k]) < 1e-14 * std::max(1.0, std::abs(b[k])));
    }
}

TEST_CASE("recentered series reproduces frak_f inside the disk") {
    const double alpha = 5.0;
    const auto s = recentered_coeffs(alpha, 150);
    for (double z : {0.0, 2.0, 5.0, 9.5, -2.0}) {
        double v = 0, p = 1;
        for (double c : s.coeffs) v += c * p, p *= (z - alpha);
        CHECK(v == doctest::Approx(frak_f(z)).epsilon(1e-13));
    }
}

TEST_CASE("dense Taylor route matches a dense eigensolver oracle") {
    const auto r = oracle::random_chain(40, 3);
    const auto prof = oracle::smooth_profiles(40);
    auto [Ap, Ar] = build_gibbs_operators(r, prof);
    const Tridiag T = Ap.scaled(0.25);
    const Eigen::MatrixXd ref = oracle::dense_function(T.dense(), oracle::xcothx_of_square);
    const double alpha = 1.0;
    for (int K : {10, 20, 60}) {
        const TaylorResult t = matrix_function_taylor(T, alpha, K);
        const double err = (t.value - ref).cwiseAbs().maxCoeff();
        CHECK(err <= t.remainder_bound + 1e-13);
        if (K == 60) CHECK(err < 1e-13);
    }
    CHECK((matrix_function_spectral(T, [](double z) { return frak_f(z); }) - ref).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("local Horner diagonal equals the dense polynomial diagonal") {
    for (int n : {2, 3, 9, 120}) {
        const auto r = oracle::random_chain(n, 77 + n);
        auto [Ap, Ar] = build_gibbs_operators(r, oracle::smooth_profiles(n));
        for (const Tridiag& T : {Ap.scaled(0.25), Ar.scaled(0.25)}) {
            const TaylorPlan plan = plan_taylor(T);
            CHECK(plan.tail_estimate <= 1e-15);
            const TaylorResult dense = matrix_function_taylor(T, plan.series.alpha, plan.K);
            const Eigen::VectorXd d = taylor_diagonal(T, plan);
            CHECK((d - dense.value.diagonal()).cwiseAbs().maxCoeff() < 1e-13);
            const Eigen::MatrixXd ref = oracle::dense_function(T.dense(), oracle::xcothx_of_square);
            CHECK((d - ref.diagonal()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("plan_taylor rejects an order cap that is too small") {
    const auto r = oracle::random_chain(20, 1);
    auto [Ap, Ar] = build_gibbs_operators(r, equilibrium_profiles(20, 1.0));
    CHECK_THROWS_AS(plan_taylor(Ap.scaled(0.25), 1e-15, 3), NumericalError);
}

TEST_CASE("remainder bound decreases with the order") {
    const auto r = oracle::random_chain(20, 1);
    auto [Ap, Ar] = build_gibbs_operators(r, equilibrium_profiles(20, 1.0));
    const Tridiag T = Ap.scaled(0.25);
    const double a = default_taylor_center(1.0, r.masses.minCoeff()) / 4;
    CHECK(taylor_remainder_bound(T, a, 40) < taylor_remainder_bound(T, a, 20));
}
