#pragma once

#include "qhchain/errors.hpp"
#include "qhchain/tridiagonal.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qhc {

// Seed plumbing: one 64-bit base seed, independent sub-streams per realization.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    // 53-bit uniform in [0,1); fixed conversion so draws are identical across standard libraries.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

struct MassLaw {
    enum class Kind { uniform, custom };
    Kind kind = Kind::uniform;
    double m_min = 0.8;
    double m_max = 1.2;
    // Custom law: unnormalized density samples on a uniform grid over [m_min, m_max].
    // Empty table selects the smooth bump exp(-1/(1-s^2)).
    std::vector<double> density_table;

    void validate() const;
    bool degenerate() const { return m_max == m_min; }
    double density(double m) const;  // normalized
    double mean() const;
    double variance() const;
    double sample(Rng& rng) const;

private:
    double raw_density(double m) const;
    double raw_mass() const;
};

struct Profile {
    enum class Kind { constant, sine, cosine, bump, table };
    Kind kind = Kind::constant;
    double offset = 0.0;
    double amplitude = 0.0;
    double frequency = 1.0;  // sin(frequency*pi*y)
    double center = 0.5;     // bump
    double width = 0.25;     // bump half-width
    std::vector<double> table;  // samples on a uniform grid over [0,1]

    double operator()(double y) const;

    static Profile constant(double c);
    static Profile sine(double amplitude, double frequency = 1.0, double offset = 0.0);
    static Profile cosine(double amplitude, double frequency = 1.0, double offset = 0.0);
    static Profile bump(double amplitude, double center, double width, double offset = 0.0);
    static Profile tabulated(std::vector<double> samples);
};

struct ChainSpec {
    int n = 256;
    MassLaw mass_law;
    Profile beta = Profile::constant(1.0);
    Profile pbar = Profile::constant(0.0);
    Profile rbar = Profile::constant(0.0);
    double hbar = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
    // Range of beta over the lattice points x/n and a fine auxiliary grid.
    std::pair<double, double> beta_range() const;
};

struct DisorderRealization {
    std::uint64_t seed = 0;
    Eigen::VectorXd masses;
    Eigen::Index n() const { return masses.size(); }
};

struct DiscretizedProfiles {
    Eigen::VectorXd beta;  // length n
    Eigen::VectorXd pbar;  // length n
    Eigen::VectorXd rbar;  // length n-1
};

DisorderRealization sample_masses(const ChainSpec& spec, std::uint64_t seed);
// Realization `index` of an experiment with base seed `base`.
DisorderRealization sample_realization(const ChainSpec& spec, std::uint64_t base, std::uint64_t index);
DisorderRealization make_realization(Eigen::VectorXd masses, std::uint64_t seed = 0);

DiscretizedProfiles discretize_profiles(const ChainSpec& spec, int n);
DiscretizedProfiles equilibrium_profiles(int n, double beta);

std::pair<Tridiag, Tridiag> build_dynamics_operators(const DisorderRealization& real);
std::pair<Tridiag, Tridiag> build_gibbs_operators(const DisorderRealization& real,
                                                  const DiscretizedProfiles& prof);

// Discrete gradients with free ends: (grad_plus f)_x = f_{x+1} - f_x, x = 1..n-1;
// (grad_minus g)_x = g_x - g_{x-1} with g_0 = g_n = 0. grad_minus = -grad_plus^T.
Eigen::VectorXd grad_plus(const Eigen::VectorXd& f);
Eigen::VectorXd grad_minus(const Eigen::VectorXd& g);
Eigen::MatrixXd grad_plus_matrix(int n);

}  // namespace qhc
