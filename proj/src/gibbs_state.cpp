#include "qhchain/gibbs_state.hpp"

#include "qhchain/io.hpp"

#include <cmath>
#include <stdexcept>

namespace qhc {

InitialMeans initial_means(const DisorderRealization& real, const DiscretizedProfiles& prof, double mbar) {
    const Eigen::VectorXd& m = real.masses;
    const Eigen::Index n = m.size();
    if (prof.beta.size() != n || prof.pbar.size() != n || prof.rbar.size() != n - 1)
        throw std::invalid_argument("initial_means: profile/realization size mismatch");
    InitialMeans out;
    CorrectionTerm& c = out.correction;
    const Eigen::VectorXd m_over_beta = m.array() / prof.beta.array();
    c.lambda_sq = 1.0 / m_over_beta.sum();
    c.Pi0 = prof.pbar.dot(m) / mbar;
    c.values = m_over_beta * (c.lambda_sq * c.Pi0);
    out.mean_p = (m.array() / mbar * prof.pbar.array()).matrix() - c.values;
    out.mean_r = prof.rbar;
    return out;
}

double coth_weight(double g, bool classical) {
    if (!(g >= 0.0)) throw std::domain_error("coth_weight: frequency must be >= 0");
    if (classical) return 1.0;
    const double x = 0.5 * g;
    if (g < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    return x / std::tanh(x);
}

namespace {
Eigen::VectorXd mode_weights(const ModeBasis& basis, bool classical) {
    const Eigen::Index n = basis.dim();
    Eigen::VectorXd w(n - 1);
    for (Eigen::Index k = 1; k < n; ++k) w[k - 1] = coth_weight(basis.frequencies[k], classical);
    return w;
}

void check_sizes(const ModeBasis& basis, const DisorderRealization& real, const DiscretizedProfiles& prof) {
    if (basis.dim() != real.n() || prof.beta.size() != real.n())
        throw std::invalid_argument("basis/realization mismatch");
}
}  // namespace

GaussianState initial_covariances(const ModeBasis& basis, const DisorderRealization& real,
                                  const DiscretizedProfiles& prof, bool classical) {
    check_sizes(basis, real, prof);
    const Eigen::Index n = basis.dim();
    const Eigen::VectorXd sw = mode_weights(basis, classical).cwiseSqrt();
    const Eigen::VectorXd& b = prof.beta;

    GaussianState s;
    Eigen::MatrixXd S = (real.masses.array() / b.array()).sqrt().matrix().asDiagonal() * basis.momentum.rightCols(n - 1);
    S = S * sw.asDiagonal();
    s.C_pp = S * S.transpose();
    Eigen::MatrixXd R = b.head(n - 1).array().rsqrt().matrix().asDiagonal() * basis.elongation;
    R = R * sw.asDiagonal();
    s.C_rr = R * R.transpose();
    s.C_pr = Eigen::MatrixXd::Zero(n, n - 1);
    return s;
}

GaussianState locally_gibbs_state(const DisorderRealization& real, const DiscretizedProfiles& prof, double mbar,
                                  bool classical) {
    auto [Ap, Ar] = build_gibbs_operators(real, prof);
    const ModeBasis basis = build_mode_basis(Ap, real, prof);
    GaussianState s = initial_covariances(basis, real, prof, classical);
    InitialMeans means = initial_means(real, prof, mbar);
    s.mean_p = std::move(means.mean_p);
    s.mean_r = std::move(means.mean_r);
    return s;
}

double site_thermal_energy(const GaussianState& state, const DisorderRealization& real, int x) {
    const Eigen::Index n = real.n();
    if (x < 1 || x > n) throw std::out_of_range("site_thermal_energy: site outside 1..n");
    const Eigen::Index i = x - 1;
    double e = 0.5 * state.C_pp(i, i) / real.masses[i];
    if (i < n - 1) e += 0.5 * state.C_rr(i, i);
    return e;
}

Eigen::VectorXd site_thermal_energies(const GaussianState& state, const DisorderRealization& real) {
    const Eigen::Index n = real.n();
    Eigen::VectorXd e = 0.5 * state.C_pp.diagonal().cwiseQuotient(real.masses);
    e.head(n - 1) += 0.5 * state.C_rr.diagonal();
    return e;
}

Eigen::VectorXd thermal_energies_spectral(const ModeBasis& basis, const DisorderRealization& real,
                                          const DiscretizedProfiles& prof, bool classical) {
    check_sizes(basis, real, prof);
    const Eigen::Index n = basis.dim();
    const Eigen::VectorXd w = mode_weights(basis, classical);
    const Eigen::VectorXd pp = basis.momentum.rightCols(n - 1).array().square().matrix() * w;
    const Eigen::VectorXd rr = basis.elongation.array().square().matrix() * w;
    Eigen::VectorXd e = 0.5 * pp.cwiseQuotient(prof.beta);
    e.head(n - 1) += 0.5 * rr.cwiseQuotient(prof.beta.head(n - 1));
    return e;
}

Eigen::VectorXd thermal_energies_taylor(const DisorderRealization& real, const DiscretizedProfiles& prof,
                                        const std::vector<Eigen::Index>& sites, bool classical, double tol) {
    const Eigen::Index n = real.n();
    const Eigen::VectorXd psi0 = zero_mode(real.masses, prof.beta);
    Eigen::VectorXd e(static_cast<Eigen::Index>(sites.size()));
    if (classical) {
        for (std::size_t s = 0; s < sites.size(); ++s) {
            const Eigen::Index x = sites[s];
            double v = 0.5 * (1.0 - psi0[x] * psi0[x]) / prof.beta[x];
            if (x < n - 1) v += 0.5 / prof.beta[x];
            e[static_cast<Eigen::Index>(s)] = v;
        }
        return e;
    }
    auto [Ap, Ar] = build_gibbs_operators(real, prof);
    const Tridiag Ap4 = Ap.scaled(0.25), Ar4 = Ar.scaled(0.25);
    const TaylorPlan plan_p = plan_taylor(Ap4, tol);
    const TaylorPlan plan_r = plan_taylor(Ar4, tol);
    std::vector<Eigen::Index> rsites;
    for (Eigen::Index x : sites)
        if (x < n - 1) rsites.push_back(x);
    const Eigen::VectorXd dp = taylor_diagonal(Ap4, plan_p, sites);
    const Eigen::VectorXd dr = taylor_diagonal(Ar4, plan_r, rsites);
    std::size_t ri = 0;
    for (std::size_t s = 0; s < sites.size(); ++s) {
        const Eigen::Index x = sites[s];
        double v = 0.5 * (dp[static_cast<Eigen::Index>(s)] - psi0[x] * psi0[x]) / prof.beta[x];
        if (x < n - 1) v += 0.5 * dr[static_cast<Eigen::Index>(ri++)] / prof.beta[x];
        e[static_cast<Eigen::Index>(s)] = v;
    }
    return e;
}

std::pair<int, int> locality_interval(int x, int k, int n) {
    if (x < 1 || x > n) throw std::out_of_range("locality_interval: site outside 1..n");
    const int h = k / 2;
    return {std::max(x - h, 1), std::min(x + h, n)};
}

namespace {
double entry(const Tridiag& T, Eigen::Index i, Eigen::Index j) {
    if (i == j) return T.diag[i];
    return T.offdiag[std::min(i, j)];
}

double paths(const Tridiag& T, Eigen::Index pos, Eigen::Index target, int steps) {
    const Eigen::Index n = T.dim();
    if (steps == 0) return pos == target ? 1.0 : 0.0;
    if (std::abs(pos - target) > steps) return 0.0;
    double s = 0.0;
    for (int d = -1; d <= 1; ++d) {
        const Eigen::Index next = pos + d;
        if (next < 0 || next >= n) continue;
        s += entry(T, pos, next) * paths(T, next, target, steps - 1);
    }
    return s;
}
}  // namespace

double diag_power_oracle(const Tridiag& T, int x, int k) {
    if (k < 0 || k > 12) throw std::invalid_argument("diag_power_oracle: power must be in [0, 12]");
    if (x < 1 || x > T.dim()) throw std::out_of_range("diag_power_oracle: site outside 1..n");
    return paths(T, x - 1, x - 1, k);
}

double diag_power(const Tridiag& T, int x, int k) {
    if (x < 1 || x > T.dim()) throw std::out_of_range("diag_power: site outside 1..n");
    Eigen::VectorXd v = Eigen::VectorXd::Unit(T.dim(), x - 1);
    for (int i = 0; i < k; ++i) v = T.apply(v);
    return v[x - 1];
}

DisorderRealization perturb_mass(const DisorderRealization& real, int y, double delta) {
    if (y < 1 || y > real.n()) throw std::out_of_range("perturb_mass: site outside 1..n");
    DisorderRealization out = real;
    out.masses[y - 1] += delta;
    if (!(out.masses[y - 1] > 0.0)) throw std::invalid_argument("perturb_mass: resulting mass must be positive");
    return out;
}

void write_state_csv(const std::string& path, const GaussianState& state, const DisorderRealization& real) {
    const Eigen::Index n = real.n();
    const Eigen::VectorXd e = site_thermal_energies(state, real);
    CsvWriter out(path, {"x", "mean_p", "mean_r", "thermal_energy"});
    for (Eigen::Index x = 0; x < n; ++x)
        out.row(static_cast<long long>(x + 1), state.mean_p[x], x < n - 1 ? state.mean_r[x] : 0.0, e[x]);
    out.close();
}

}  // namespace qhc
