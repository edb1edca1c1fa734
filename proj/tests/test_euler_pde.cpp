#include <doctest.h>

#include "qhchain/euler_pde.hpp"
#include "qhchain/errors.hpp"

#include <numbers>

using namespace qhc;
using std::numbers::pi;

TEST_CASE("Simpson rule is exact for cubics") {
    CHECK(simpson([](double y) { return y * y * y - y; }, 0.0, 2.0, 4) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(simpson([](double y) { return std::sin(pi * y); }, 0.0, 1.0) == doctest::Approx(2 / pi).epsilon(1e-13));
}

TEST_CASE("manufactured standing wave") {
    for (double mbar : {1.0, 1.7}) {
        const WaveSolution w([](double y) { return std::sin(pi * y); }, [](double) { return 0.0; }, mbar, 16);
        const double sm = std::sqrt(mbar);
        double err = 0;
        for (double t : {0.0, 0.3, 0.77})
            for (int i = 0; i <= 50; ++i) {
                const double y = i / 50.0;
                err = std::max(err, std::abs(w.r(y, t) - std::sin(pi * y) * std::cos(pi * t / sm)));
                err = std::max(err, std::abs(w.p(y, t) - sm * std::cos(pi * y) * std::sin(pi * t / sm)));
            }
        CHECK(err < 1e-8);
        CHECK(w.pde_residual(0.4) < 1e-6);
    }
}

TEST_CASE("smooth data: residuals, momentum and energy balance") {
    const auto rbar = [](double y) { return 0.5 * std::sin(pi * y) + 0.2 * std::sin(3 * pi * y); };
    const auto pbar = [](double y) { return 0.5 * std::cos(pi * y) + 0.1; };
    const WaveSolution w(rbar, pbar, 1.0, 64);
    CHECK(w.truncation_residual() < 1e-20);
    const double P0 = simpson([&](double y) { return w.p(y, 0.0); }, 0, 1);
    for (double t : {0.25, 0.5, 1.3}) {
        CHECK(w.pde_residual(t) < 1e-6);
        CHECK(energy_residual(w, t) < 1e-6);
        CHECK(std::abs(simpson([&](double y) { return w.p(y, t); }, 0, 1) - P0) < 1e-8);
    }
    CHECK(std::abs(w.r(0.3, 0.0) - rbar(0.3)) < 1e-10);
    CHECK(std::abs(w.p(0.3, 0.0) - pbar(0.3)) < 1e-10);
}

TEST_CASE("macro solution on a grid") {
    Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(11, 0, 1);
    MacroSolution s = solve_wave_fourier([](double) { return 0.0; }, [](double y) { return std::sin(pi * y); }, 1.0, 8,
                                         grid, {0.0, 0.5});
    CHECK(s.r_field(5, 0) == doctest::Approx(1.0));
    CHECK(std::abs(s.r_field(5, 1)) < 1e-12);
    const Eigen::MatrixXd e = macro_energy(s.r_field, s.p_field, 1.0, Eigen::VectorXd::Constant(11, 0.5));
    CHECK(e(5, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(WaveSolution([](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, 4), ValidationError);
}
