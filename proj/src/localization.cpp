#include "qhchain/localization.hpp"

#include "qhchain/errors.hpp"
#include "qhchain/io.hpp"

#include <cmath>
#include <stdexcept>

namespace qhc {

double participation_ratio(const Eigen::VectorXd& v) {
    const double s2 = v.squaredNorm();
    if (!(s2 > 0.0)) throw std::invalid_argument("participation_ratio: zero vector");
    const double s4 = v.array().square().square().sum();
    return s2 * s2 / s4;
}

SupportInterval support_interval(const Eigen::VectorXd& v, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("support_interval: eps must be in (0,1)");
    const Eigen::Index n = v.size();
    const double need = (1.0 - eps) * v.squaredNorm();
    SupportInterval best{0, n - 1};
    double mass = 0.0;
    Eigen::Index j = 0;  // window [i, j)
    for (Eigen::Index i = 0; i < n; ++i) {
        while (j < n && mass < need) {
            mass += v[j] * v[j];
            ++j;
        }
        if (mass < need) break;
        if (j - i < best.width()) best = {i, j - 1};
        mass -= v[i] * v[i];
    }
    return best;
}

namespace {
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    if (m < 2) return 0.0;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
    }
    sx /= m;
    sy /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (x[i] - sx) * (y[i] - sy);
        sxx += (x[i] - sx) * (x[i] - sx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}
}  // namespace

LocalizationReport localization_report(const ModeBasis& basis0, const Eigen::VectorXd& masses, double alpha,
                                       double eta, double eps) {
    if (!(alpha > 0.0 && 2.0 * alpha < eta && eta < 1.0))
        throw ValidationError("alpha", "localization needs 0 < 2*alpha < eta < 1");
    const Eigen::Index n = basis0.dim();
    LocalizationReport rep;
    rep.n = n;
    rep.alpha = alpha;
    rep.eta = eta;
    rep.eps = eps;
    rep.width_threshold = 2.0 * std::pow(double(n), eta);
    const double k0 = std::pow(double(n), 1.0 - alpha);
    const Eigen::VectorXd rsm = masses.array().rsqrt();
    std::vector<double> lw, lo;
    double pr_sum = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        if (!(double(k) > k0)) continue;
        const Eigen::VectorXd phi = basis0.momentum.col(k);
        ModeLocalization m;
        m.k = k;
        m.omega = basis0.frequencies[k];
        m.participation_ratio = participation_ratio(phi);
        const SupportInterval J = support_interval(phi, eps);
        m.width = J.width();
        m.center = (J.first + J.last) / 2 + 1;
        const Eigen::VectorXd amp = rsm.cwiseProduct(phi).cwiseAbs();
        for (Eigen::Index x = 0; x < n; ++x)
            if (x < J.first || x > J.last) m.outside_max = std::max(m.outside_max, amp[x]);
        Eigen::Index peak;
        phi.cwiseAbs().maxCoeff(&peak);
        std::vector<double> dist, logamp;
        for (Eigen::Index x = 0; x < n; ++x)
            if (std::abs(phi[x]) > 1e-250) {
                dist.push_back(static_cast<double>(std::abs(x - peak)));
                logamp.push_back(std::log(std::abs(phi[x])));
            }
        m.decay_rate = -fit_slope(dist, logamp);
        m.localized = static_cast<double>(m.width) <= rep.width_threshold;
        if (m.localized) {
            ++rep.passed;
            rep.omega_bound_constant =
                std::max(rep.omega_bound_constant, (1.0 / m.omega) / std::pow(double(n), 1.5 * eta));
        }
        pr_sum += m.participation_ratio;
        lw.push_back(std::log(static_cast<double>(m.width)));
        lo.push_back(std::log(m.omega));
        rep.modes.push_back(m);
    }
    if (!rep.modes.empty()) {
        rep.pass_fraction = static_cast<double>(rep.passed) / static_cast<double>(rep.modes.size());
        rep.mean_participation = pr_sum / static_cast<double>(rep.modes.size());
    }
    rep.width_omega_exponent = fit_slope(lo, lw);
    return rep;
}

void write_localization_csv(const std::string& path, const LocalizationReport& report) {
    CsvWriter out(path, {"k", "omega", "pr", "width", "outside_max", "decay_rate"});
    for (const auto& m : report.modes)
        out.row(static_cast<long long>(m.k), m.omega, m.participation_ratio, static_cast<long long>(m.width),
                m.outside_max, m.decay_rate);
    out.close();
}

}  // namespace qhc
