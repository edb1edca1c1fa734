#include "qhchain/euler_pde.hpp"

#include "qhchain/errors.hpp"
#include "qhchain/io.hpp"

#include <cmath>
#include <numbers>

namespace qhc {

using std::numbers::pi;

double simpson(const ScalarField& f, double a, double b, int intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

WaveSolution::WaveSolution(const ScalarField& rbar, const ScalarField& pbar, double mbar, int K_modes,
                           int quad_points)
    : K_(K_modes), mbar_(mbar) {
    if (K_modes < 1) throw std::invalid_argument("solve_wave_fourier: need at least one mode");
    if (!(mbar > 0.0)) throw ValidationError("mbar", "mean mass must be positive");
    if (std::abs(rbar(0.0)) > 1e-12 || std::abs(rbar(1.0)) > 1e-12)
        throw ValidationError("rbar", "elongation profile must vanish at y=0 and y=1");
    const int Kq = std::max(K_modes, std::min(quad_points / 8, 512));
    Eigen::VectorXd A(Kq + 1), B(Kq + 1);
    A[0] = 0.0;
    B[0] = simpson(pbar, 0.0, 1.0, quad_points);
    for (int k = 1; k <= Kq; ++k) {
        const double kp = k * pi;
        A[k] = 2.0 * simpson([&](double y) { return rbar(y) * std::sin(kp * y); }, 0.0, 1.0, quad_points);
        B[k] = 2.0 * simpson([&](double y) { return pbar(y) * std::cos(kp * y); }, 0.0, 1.0, quad_points);
    }
    A_ = A.segment(1, K_modes);
    B_ = B.head(K_modes + 1);
    for (int k = K_modes + 1; k <= Kq; ++k) residual_ += 0.5 * (A[k] * A[k] + B[k] * B[k]);
}

double WaveSolution::omega(int k) const { return k * pi / std::sqrt(mbar_); }

void WaveSolution::coeffs_at(double t, Eigen::VectorXd& A, Eigen::VectorXd& B) const {
    const double sm = std::sqrt(mbar_);
    A.resize(K_);
    B.resize(K_ + 1);
    B[0] = B_[0];
    for (int k = 1; k <= K_; ++k) {
        const double c = std::cos(omega(k) * t), s = std::sin(omega(k) * t);
        const double a = A_[k - 1], b = B_[k];
        A[k - 1] = a * c - b * s / sm;
        B[k] = b * c + sm * a * s;
    }
}

double WaveSolution::r(double y, double t) const {
    Eigen::VectorXd A, B;
    coeffs_at(t, A, B);
    double s = 0.0;
    for (int k = 1; k <= K_; ++k) s += A[k - 1] * std::sin(k * pi * y);
    return s;
}

double WaveSolution::p(double y, double t) const {
    Eigen::VectorXd A, B;
    coeffs_at(t, A, B);
    double s = B[0];
    for (int k = 1; k <= K_; ++k) s += B[k] * std::cos(k * pi * y);
    return s;
}

namespace {
template <typename F>
double d4(F&& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}
}  // namespace

double WaveSolution::pde_residual(double t, int ny, double h) const {
    double res = 0.0;
    for (int i = 0; i < ny; ++i) {
        const double y = (i + 0.5) / ny;
        const double rt = d4([&](double s) { return r(y, s); }, t, h);
        const double py = d4([&](double s) { return p(s, t); }, y, h);
        const double pt = d4([&](double s) { return p(y, s); }, t, h);
        const double ry = d4([&](double s) { return r(s, t); }, y, h);
        res = std::max({res, std::abs(rt - py / mbar_), std::abs(pt - ry)});
    }
    return res;
}

double energy_residual(const WaveSolution& sol, double t, int ny, double h) {
    const double mb = sol.mbar();
    auto e = [&](double y, double s) {
        const double p = sol.p(y, s), r = sol.r(y, s);
        return p * p / (2 * mb) + r * r / 2;
    };
    double res = 0.0;
    for (int i = 0; i < ny; ++i) {
        const double y = (i + 0.5) / ny;
        const double et = d4([&](double s) { return e(y, s); }, t, h);
        const double fy = d4([&](double s) { return sol.r(s, t) * sol.p(s, t); }, y, h);
        res = std::max(res, std::abs(et - fy / mb));
    }
    return res;
}

MacroSolution solve_wave_fourier(const ScalarField& pbar, const ScalarField& rbar, double mbar, int K_modes,
                                 const Eigen::VectorXd& grid, const std::vector<double>& times) {
    const WaveSolution w(rbar, pbar, mbar, K_modes);
    MacroSolution out;
    out.grid = grid;
    out.times = times;
    out.mbar = mbar;
    out.r_field.resize(grid.size(), static_cast<Eigen::Index>(times.size()));
    out.p_field.resize(grid.size(), static_cast<Eigen::Index>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j)
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            out.r_field(i, static_cast<Eigen::Index>(j)) = w.r(grid[i], times[j]);
            out.p_field(i, static_cast<Eigen::Index>(j)) = w.p(grid[i], times[j]);
        }
    out.fmu_profile = Eigen::VectorXd::Zero(grid.size());
    out.e_field = macro_energy(out.r_field, out.p_field, mbar, out.fmu_profile);
    return out;
}

Eigen::MatrixXd macro_energy(const Eigen::MatrixXd& r_field, const Eigen::MatrixXd& p_field, double mbar,
                             const Eigen::VectorXd& fmu_profile) {
    if (r_field.rows() != p_field.rows() || r_field.cols() != p_field.cols() || fmu_profile.size() != r_field.rows())
        throw std::invalid_argument("macro_energy: grid mismatch");
    Eigen::MatrixXd e = p_field.array().square() / (2.0 * mbar) + r_field.array().square() / 2.0;
    e.colwise() += fmu_profile;
    return e;
}

void write_macro_csv(const std::string& path, const MacroSolution& sol) {
    CsvWriter out(path, {"y", "t", "r", "p", "e"});
    for (std::size_t j = 0; j < sol.times.size(); ++j)
        for (Eigen::Index i = 0; i < sol.grid.size(); ++i) {
            const auto c = static_cast<Eigen::Index>(j);
            out.row(sol.grid[i], sol.times[j], sol.r_field(i, c), sol.p_field(i, c), sol.e_field(i, c));
        }
    out.close();
}

}  // namespace qhc
