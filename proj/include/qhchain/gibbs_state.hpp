#pragma once

#include "qhchain/lattice_model.hpp"
#include "qhchain/matrix_function.hpp"
#include "qhchain/spectral.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace qhc {

// Gaussian state: means and symmetrized covariances of momenta p (n) and elongations r (n-1).
struct GaussianState {
    Eigen::VectorXd mean_p;
    Eigen::VectorXd mean_r;
    Eigen::MatrixXd C_pp;
    Eigen::MatrixXd C_rr;
    Eigen::MatrixXd C_pr;
};

struct CorrectionTerm {
    double lambda_sq = 0;  // (sum m_x / beta_x)^{-1}
    double Pi0 = 0;        // sum pbar_x m_x / mbar
    Eigen::VectorXd values;
};

struct InitialMeans {
    Eigen::VectorXd mean_p;
    Eigen::VectorXd mean_r;
    CorrectionTerm correction;
};

InitialMeans initial_means(const DisorderRealization& real, const DiscretizedProfiles& prof, double mbar);

// (g/2) coth(g/2); 1 at g = 0; 1 for every g in classical mode.
double coth_weight(double g, bool classical = false);

// Covariance blocks of the locally Gibbs state from the modes of A_p^beta. Means are left empty.
GaussianState initial_covariances(const ModeBasis& basis_beta, const DisorderRealization& real,
                                  const DiscretizedProfiles& prof, bool classical = false);

// Means and covariances together.
GaussianState locally_gibbs_state(const DisorderRealization& real, const DiscretizedProfiles& prof, double mbar,
                                  bool classical = false);

// C_pp(x,x)/(2 m_x) + C_rr(x,x)/2, r-term omitted at x = n. x is 1-based.
double site_thermal_energy(const GaussianState& state, const DisorderRealization& real, int x);
Eigen::VectorXd site_thermal_energies(const GaussianState& state, const DisorderRealization& real);

// Thermal energies straight from the modes, O(n^2), without forming covariance matrices.
Eigen::VectorXd thermal_energies_spectral(const ModeBasis& basis_beta, const DisorderRealization& real,
                                          const DiscretizedProfiles& prof, bool classical = false);

// Thermal energies of selected 0-based sites through frak_f(A/4) diagonals by the local
// Taylor route; cost O(K^2) per site. Avoids any eigendecomposition.
Eigen::VectorXd thermal_energies_taylor(const DisorderRealization& real, const DiscretizedProfiles& prof,
                                        const std::vector<Eigen::Index>& sites, bool classical = false,
                                        double tol = 1e-15);

// Locality: [max(x - k/2, 1), min(x + k/2, n)] with integer division; 1-based.
std::pair<int, int> locality_interval(int x, int k, int n);

// <x, T^k x> by enumerating all stay/left/right return paths (k <= 12). x is 1-based.
double diag_power_oracle(const Tridiag& T, int x, int k);
// <x, T^k x> by repeated application. x is 1-based.
double diag_power(const Tridiag& T, int x, int k);

// Copy with m_y += delta; y is 1-based.
DisorderRealization perturb_mass(const DisorderRealization& real, int y, double delta);

void write_state_csv(const std::string& path, const GaussianState& state, const DisorderRealization& real);

}  // namespace qhc
