#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace qhc {

using ScalarField = std::function<double(double)>;

// Composite Simpson rule on [a, b] with `intervals` (made even) subintervals.
double simpson(const ScalarField& f, double a, double b, int intervals = 4096);

// r(y,t) = sum_k A_k(t) sin(k pi y), p(y,t) = B_0 + sum_k B_k(t) cos(k pi y), the closed-form
// solution of d_t r = d_y p / mbar, d_t p = d_y r with r(0,t) = r(1,t) = 0.
class WaveSolution {
public:
    WaveSolution(const ScalarField& rbar, const ScalarField& pbar, double mbar, int K_modes, int quad_points = 4096);

    double r(double y, double t) const;
    double p(double y, double t) const;
    double omega(int k) const;
    int modes() const { return K_; }
    double mbar() const { return mbar_; }
    // Spectral mass of the initial data beyond K (coefficients computed up to the quadrature limit).
    double truncation_residual() const { return residual_; }
    const Eigen::VectorXd& sine_coeffs() const { return A_; }    // A_1..A_K at t = 0
    const Eigen::VectorXd& cosine_coeffs() const { return B_; }  // B_0..B_K at t = 0

    // max over a ny-point grid of |d_t r - d_y p / mbar| and |d_t p - d_y r| by 4th-order differences.
    double pde_residual(double t, int ny = 512, double h = 1e-3) const;

private:
    void coeffs_at(double t, Eigen::VectorXd& A, Eigen::VectorXd& B) const;
    int K_;
    double mbar_;
    Eigen::VectorXd A_, B_;
    double residual_ = 0;
};

struct MacroSolution {
    Eigen::VectorXd grid;
    std::vector<double> times;
    Eigen::MatrixXd r_field, p_field, e_field;  // (grid point, time)
    double mbar = 1;
    Eigen::VectorXd fmu_profile;  // f^mu_beta(y) on the grid
};

MacroSolution solve_wave_fourier(const ScalarField& pbar, const ScalarField& rbar, double mbar, int K_modes,
                                 const Eigen::VectorXd& grid, const std::vector<double>& times);

// e = p^2/(2 mbar) + r^2/2 + f^mu.
Eigen::MatrixXd macro_energy(const Eigen::MatrixXd& r_field, const Eigen::MatrixXd& p_field, double mbar,
                             const Eigen::VectorXd& fmu_profile);

// max |d_t e - d_y(r p)/mbar| on a ny-point grid, by 4th-order differences.
double energy_residual(const WaveSolution& sol, double t, int ny = 512, double h = 1e-3);

void write_macro_csv(const std::string& path, const MacroSolution& sol);

}  // namespace qhc
