#pragma once

#include "qhchain/gibbs_state.hpp"
#include "qhchain/spectral.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace qhc {

// Modes of the Hamiltonian (beta = 1) and the output times. Rotation angles are
// omega_k * n^a * t with a the time-scale exponent (1 = hyperbolic).
struct EvolutionPlan {
    ModeBasis basis0;
    Eigen::VectorXd masses;
    std::vector<double> macro_times;
    double time_scale_exponent = 1.0;

    Eigen::Index n() const { return masses.size(); }
    double angle_scale() const;
};

EvolutionPlan make_evolution_plan(const DisorderRealization& real, std::vector<double> macro_times = {},
                                  double time_scale_exponent = 1.0);

// u_k = <M^{-1/2} phi^k, p>, v_k = <phi~^k, r> (v_0 = 0), and their covariance blocks.
// Covariance blocks are empty when only means are carried.
struct ModeCoordinates {
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    Eigen::MatrixXd S_uu;
    Eigen::MatrixXd S_vv;
    Eigen::MatrixXd S_uv;

    bool has_covariance() const { return S_uu.size() > 0; }
};

ModeCoordinates to_mode_coordinates(const GaussianState& state, const EvolutionPlan& plan);
ModeCoordinates evolve(const ModeCoordinates& coords, const EvolutionPlan& plan, double t_macro);
GaussianState from_mode_coordinates(const ModeCoordinates& coords, const EvolutionPlan& plan);

// Site thermal energies at the coordinates' time, restricted to modes [k_begin, k_end).
// Momentum modes k index phi^k (k = 0 is the zero mode); elongation mode k uses phi~^k.
Eigen::VectorXd thermal_energies_modes(const ModeCoordinates& coords, const EvolutionPlan& plan,
                                       Eigen::Index k_begin, Eigen::Index k_end);
Eigen::VectorXd thermal_energies(const ModeCoordinates& coords, const EvolutionPlan& plan);

struct Conserved {
    double H = 0;  // sum pbar^2/2m + sum rbar^2/2
    double I = 0;  // 1/2 sum (grad_minus rbar)^2/m + 1/2 sum (grad_plus M^{-1} pbar)^2
};
Conserved conserved_quantities(const GaussianState& state, const DisorderRealization& real);
double total_momentum(const GaussianState& state);

using TestFunction = std::function<double(double)>;

struct ModeSplit {
    double L = 0;        // low modes k <= n^{1-alpha}
    double U = 0;        // high modes
    double E_cross = 0;  // T - L - U
    double T = 0;        // (1/n) sum g(x/n) <e~_x>
    double K = 0;        // (1/n) sum g(x/n) (mean_p^2/2m + mean_r^2/2)
    Eigen::Index k_low = 0;
};
ModeSplit mode_split_functionals(const ModeCoordinates& coords_t, const EvolutionPlan& plan, const TestFunction& g,
                                 double alpha = 0.25);

Eigen::VectorXd mechanical_energies(const GaussianState& state, const DisorderRealization& real);

struct HolderReport {
    double r_ratio = 0;  // max |r_x - r_x'| sqrt(n) / sqrt|x - x'|
    double p_ratio = 0;  // same for p_x / m_x
    double r_sup = 0;    // max |r_x|
};
HolderReport holder_check(const std::vector<GaussianState>& trajectory, const DisorderRealization& real);

}  // namespace qhc
