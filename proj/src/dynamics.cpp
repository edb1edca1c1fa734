#include "qhchain/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace qhc {

double EvolutionPlan::angle_scale() const {
    return std::pow(static_cast<double>(n()), time_scale_exponent);
}

EvolutionPlan make_evolution_plan(const DisorderRealization& real, std::vector<double> macro_times,
                                  double time_scale_exponent) {
    for (std::size_t i = 1; i < macro_times.size(); ++i)
        if (macro_times[i] < macro_times[i - 1]) throw std::invalid_argument("evolution plan: times must be sorted");
    EvolutionPlan plan;
    auto [Ap, Ar] = build_dynamics_operators(real);
    plan.basis0 = build_mode_basis(Ap, real);
    plan.masses = real.masses;
    plan.macro_times = std::move(macro_times);
    plan.time_scale_exponent = time_scale_exponent;
    return plan;
}

namespace {
// M^{-1/2} Phi
Eigen::MatrixXd scaled_modes(const EvolutionPlan& plan) {
    return plan.masses.array().rsqrt().matrix().asDiagonal() * plan.basis0.momentum;
}
}  // namespace

ModeCoordinates to_mode_coordinates(const GaussianState& state, const EvolutionPlan& plan) {
    const Eigen::Index n = plan.n();
    if (state.mean_p.size() != n || state.mean_r.size() != n - 1)
        throw std::invalid_argument("to_mode_coordinates: state size does not match plan");
    const Eigen::MatrixXd P = scaled_modes(plan);
    const Eigen::MatrixXd& Pt = plan.basis0.elongation;
    ModeCoordinates c;
    c.u = P.transpose() * state.mean_p;
    c.v = Eigen::VectorXd::Zero(n);
    c.v.tail(n - 1) = Pt.transpose() * state.mean_r;
    if (state.C_pp.size() > 0) {
        if (state.C_pp.rows() != n || state.C_rr.rows() != n - 1)
            throw std::invalid_argument("to_mode_coordinates: covariance size does not match plan");
        c.S_uu = P.transpose() * (state.C_pp * P);
        c.S_vv = Eigen::MatrixXd::Zero(n, n);
        c.S_vv.bottomRightCorner(n - 1, n - 1) = Pt.transpose() * (state.C_rr * Pt);
        c.S_uv = Eigen::MatrixXd::Zero(n, n);
        if (state.C_pr.size() > 0) c.S_uv.rightCols(n - 1) = P.transpose() * (state.C_pr * Pt);
    }
    return c;
}

ModeCoordinates evolve(const ModeCoordinates& in, const EvolutionPlan& plan, double t_macro) {
    const Eigen::Index n = plan.n();
    const double scale = plan.angle_scale() * t_macro;
    Eigen::VectorXd c(n), s(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double th = plan.basis0.frequencies[k] * scale;
        c[k] = std::cos(th);
        s[k] = std::sin(th);
    }
    ModeCoordinates out;
    out.u = c.cwiseProduct(in.u) - s.cwiseProduct(in.v);
    out.v = c.cwiseProduct(in.v) + s.cwiseProduct(in.u);
    if (!in.has_covariance()) return out;

    out.S_uu.resize(n, n);
    out.S_vv.resize(n, n);
    out.S_uv.resize(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index k = 0; k < n; ++k) {
            const double uu = in.S_uu(k, l), vv = in.S_vv(k, l), uv = in.S_uv(k, l), vu = in.S_uv(l, k);
            const double cc = c[k] * c[l], cs = c[k] * s[l], sc = s[k] * c[l], ss = s[k] * s[l];
            out.S_uu(k, l) = cc * uu - cs * uv - sc * vu + ss * vv;
            out.S_vv(k, l) = cc * vv + cs * vu + sc * uv + ss * uu;
            out.S_uv(k, l) = cc * uv + cs * uu - sc * vv - ss * vu;
        }
    return out;
}

GaussianState from_mode_coordinates(const ModeCoordinates& coords, const EvolutionPlan& plan) {
    const Eigen::Index n = plan.n();
    const Eigen::VectorXd sm = plan.masses.cwiseSqrt();
    const Eigen::MatrixXd Q = sm.asDiagonal() * plan.basis0.momentum;  // M^{1/2} Phi
    const Eigen::MatrixXd& Pt = plan.basis0.elongation;
    GaussianState s;
    s.mean_p = Q * coords.u;
    s.mean_r = Pt * coords.v.tail(n - 1);
    if (coords.has_covariance()) {
        s.C_pp = Q * coords.S_uu * Q.transpose();
        s.C_rr = Pt * coords.S_vv.bottomRightCorner(n - 1, n - 1) * Pt.transpose();
        s.C_pr = Q * coords.S_uv.rightCols(n - 1) * Pt.transpose();
    }
    return s;
}

namespace {
// diag(A_rows S A_cols^T) restricted to mode ranges [a0,a1) x [b0,b1).
Eigen::VectorXd block_diag(const Eigen::MatrixXd& modes, const Eigen::MatrixXd& S, Eigen::Index a0, Eigen::Index a1,
                           Eigen::Index b0, Eigen::Index b1, Eigen::Index mode_offset) {
    if (a1 <= a0 || b1 <= b0) return Eigen::VectorXd::Zero(modes.rows());
    const auto A = modes.middleCols(a0 - mode_offset, a1 - a0);
    const auto B = modes.middleCols(b0 - mode_offset, b1 - b0);
    const Eigen::MatrixXd AS = A * S.block(a0, b0, a1 - a0, b1 - b0);
    return AS.cwiseProduct(B).rowwise().sum();
}

Eigen::VectorXd thermal_block(const ModeCoordinates& c, const EvolutionPlan& plan, Eigen::Index a0, Eigen::Index a1,
                              Eigen::Index b0, Eigen::Index b1) {
    const Eigen::Index n = plan.n();
    if (!c.has_covariance()) throw std::invalid_argument("thermal energies need covariance blocks");
    Eigen::VectorXd e = 0.5 * block_diag(plan.basis0.momentum, c.S_uu, a0, a1, b0, b1, 0);
    const Eigen::Index ra0 = std::max<Eigen::Index>(a0, 1), rb0 = std::max<Eigen::Index>(b0, 1);
    e.head(n - 1) += 0.5 * block_diag(plan.basis0.elongation, c.S_vv, ra0, a1, rb0, b1, 1);
    return e;
}

double weighted_mean(const Eigen::VectorXd& values, const TestFunction& g, Eigen::Index n) {
    double s = 0.0;
    for (Eigen::Index x = 0; x < values.size(); ++x) s += g(static_cast<double>(x + 1) / n) * values[x];
    return s / n;
}
}  // namespace

Eigen::VectorXd thermal_energies_modes(const ModeCoordinates& coords, const EvolutionPlan& plan, Eigen::Index k_begin,
                                       Eigen::Index k_end) {
    return thermal_block(coords, plan, k_begin, k_end, k_begin, k_end);
}

Eigen::VectorXd thermal_energies(const ModeCoordinates& coords, const EvolutionPlan& plan) {
    return thermal_energies_modes(coords, plan, 0, plan.n());
}

Conserved conserved_quantities(const GaussianState& state, const DisorderRealization& real) {
    const Eigen::VectorXd& m = real.masses;
    Conserved c;
    c.H = 0.5 * (state.mean_p.array().square() / m.array()).sum() + 0.5 * state.mean_r.squaredNorm();
    const Eigen::VectorXd dr = grad_minus(state.mean_r);
    const Eigen::VectorXd dp = grad_plus(state.mean_p.cwiseQuotient(m));
    c.I = 0.5 * (dr.array().square() / m.array()).sum() + 0.5 * dp.squaredNorm();
    return c;
}

double total_momentum(const GaussianState& state) { return state.mean_p.sum(); }

Eigen::VectorXd mechanical_energies(const GaussianState& state, const DisorderRealization& real) {
    const Eigen::Index n = real.n();
    Eigen::VectorXd e = 0.5 * state.mean_p.array().square() / real.masses.array();
    e.head(n - 1).array() += 0.5 * state.mean_r.array().square();
    return e;
}

ModeSplit mode_split_functionals(const ModeCoordinates& coords, const EvolutionPlan& plan, const TestFunction& g,
                                 double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mode_split_functionals: alpha must be in (0,1)");
    const Eigen::Index n = plan.n();
    ModeSplit out;
    out.k_low = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(std::pow(double(n), 1.0 - alpha) + 1e-9)), n - 1);
    const Eigen::Index split = out.k_low + 1;
    const Eigen::VectorXd low = thermal_block(coords, plan, 0, split, 0, split);
    const Eigen::VectorXd high = thermal_block(coords, plan, split, n, split, n);
    // Off-diagonal blocks of a symmetric form contribute twice.
    const Eigen::VectorXd cross = 2.0 * thermal_block(coords, plan, 0, split, split, n);
    const Eigen::VectorXd total = thermal_energies(coords, plan);
    out.L = weighted_mean(low, g, n);
    out.U = weighted_mean(high, g, n);
    out.E_cross = weighted_mean(cross, g, n);
    out.T = weighted_mean(total, g, n);
    const GaussianState means = from_mode_coordinates(ModeCoordinates{coords.u, coords.v, {}, {}, {}}, plan);
    DisorderRealization real;
    real.masses = plan.masses;
    out.K = weighted_mean(mechanical_energies(means, real), g, n);
    return out;
}

HolderReport holder_check(const std::vector<GaussianState>& trajectory, const DisorderRealization& real) {
    HolderReport h;
    const Eigen::Index n = real.n();
    const double sn = std::sqrt(static_cast<double>(n));
    for (const GaussianState& s : trajectory) {
        const Eigen::VectorXd q = s.mean_p.cwiseQuotient(real.masses);
        h.r_sup = std::max(h.r_sup, s.mean_r.cwiseAbs().maxCoeff());
        for (Eigen::Index x = 0; x < n; ++x)
            for (Eigen::Index y = x + 1; y < n; ++y) {
                const double w = sn / std::sqrt(static_cast<double>(y - x));
                h.p_ratio = std::max(h.p_ratio, std::abs(q[x] - q[y]) * w);
                if (y < n - 1) h.r_ratio = std::max(h.r_ratio, std::abs(s.mean_r[x] - s.mean_r[y]) * w);
            }
    }
    return h;
}

}  // namespace qhc
