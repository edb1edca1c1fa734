#include "qhchain/matrix_function.hpp"

#include "qhchain/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace qhc {

using std::numbers::pi;

double frak_f(double z) {
    if (z > 1e-6) {
        const double s = std::sqrt(z);
        return s / std::tanh(s);
    }
    if (z < -1e-6) {
        const double s = std::sqrt(-z);
        return s / std::tan(s);
    }
    return 1.0 + z * (1.0 / 3.0 + z * (-1.0 / 45.0 + z * (2.0 / 945.0)));
}

std::complex<double> frak_f(std::complex<double> z) {
    if (std::abs(z) < 1e-6) return 1.0 + z * (1.0 / 3.0 + z * (-1.0 / 45.0 + z * (2.0 / 945.0)));
    const std::complex<double> s = std::sqrt(z);
    return s / std::tanh(s);
}

// ---- exact z-series ----

namespace {

namespace mp = boost::multiprecision;

std::vector<double> coefficient_table(int K) {
    static std::mutex mu;
    static std::vector<double> table;
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<int>(table.size()) > K) return {table.begin(), table.begin() + K + 1};

    // Bernoulli numbers from sum_{j=0}^{m} C(m+1, j) B_j = 0; odd B_j vanish for j >= 3.
    const int mmax = 2 * K;
    std::vector<mp::cpp_rational> B(mmax + 1);
    B[0] = 1;
    if (mmax >= 1) B[1] = mp::cpp_rational(-1, 2);
    for (int m = 2; m <= mmax; m += 2) {
        mp::cpp_rational s = 0;
        mp::cpp_int binom = 1;  // C(m+1, j)
        for (int j = 0; j < m; ++j) {
            if (j <= 1 || j % 2 == 0) s += mp::cpp_rational(binom) * B[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        B[m] = -s / (m + 1);
    }
    table.assign(K + 1, 0.0);
    mp::cpp_int fact = 1;  // (2k)!
    mp::cpp_int pow4 = 1;  // 2^{2k}
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            fact *= (2 * k - 1) * (2 * k);
            pow4 *= 4;
        }
        const mp::cpp_rational a = B[2 * k] * mp::cpp_rational(pow4) / mp::cpp_rational(fact);
        table[k] = static_cast<double>(a);
    }
    return {table.begin(), table.begin() + K + 1};
}

}  // namespace

std::vector<double> taylor_xcothx_coeffs(int K) {
    if (K < 0 || K > 200) throw std::invalid_argument("taylor_xcothx_coeffs: order must be in [0, 200]");
    return coefficient_table(K);
}

// ---- recentering ----

RecenteredSeries recentered_coeffs(double alpha, int K) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("recentered_coeffs: center must be >= 0");
    RecenteredSeries s;
    s.alpha = alpha;
    const double R = alpha + pi * pi;  // distance to the nearest pole
    const double rho = alpha + 0.5 * pi * pi;
    s.contour_radius = rho;
    // Aliasing error ~ (rho/R)^N; keep it below 1e-18.
    const double need = 42.0 / std::log(R / rho);
    int N = 512;
    while (N < need && N < (1 << 20)) N *= 2;
    s.coeffs.assign(K + 1, 0.0);
    std::vector<double> acc(K + 1, 0.0);
    for (int j = 0; j < N; ++j) {
        const double th = 2.0 * pi * (j + 0.5) / N;
        const std::complex<double> u = std::polar(1.0, th);
        const std::complex<double> fz = frak_f(alpha + rho * u);
        s.contour_max = std::max(s.contour_max, std::abs(fz));
        std::complex<double> t = fz;
        const std::complex<double> w = std::conj(u);
        for (int k = 0; k <= K; ++k) {
            acc[k] += t.real();
            t *= w;
        }
    }
    double scale = 1.0 / N;
    for (int k = 0; k <= K; ++k) {
        s.coeffs[k] = acc[k] * scale;
        scale /= rho;
    }
    return s;
}

std::vector<double> recentered_coeffs_binomial(double alpha, int K, int J) {
    const std::vector<double> a = taylor_xcothx_coeffs(J);
    std::vector<double> out(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double binom = 1.0;  // C(j, k)
        double pw = 1.0;     // alpha^{j-k}
        double s = 0.0;
        for (int j = k; j <= J; ++j) {
            s += binom * a[j] * pw;
            binom = binom * (j + 1) / (j + 1 - k);
            pw *= alpha;
        }
        out[k] = s;
    }
    return out;
}

double default_taylor_center(double beta_max, double m_min) {
    const double c0 = 4.0 * beta_max * beta_max / m_min;
    return 0.5 * (c0 + 1.0);
}

namespace {
double shifted_norm_bound(const Tridiag& T, double alpha) {
    auto [lo, hi] = T.gershgorin();
    return std::max(std::abs(hi - alpha), std::abs(alpha - lo));
}
}  // namespace

double taylor_remainder_bound(const Tridiag& T, double alpha, int K) {
    const double r = shifted_norm_bound(T, alpha);
    const double rho = r / (alpha + 1.0);
    if (!(rho < 1.0)) return std::numeric_limits<double>::infinity();
    double M = 0.0;
    for (int j = 0; j < 256; ++j)
        M = std::max(M, std::abs(frak_f(alpha + (alpha + 1.0) * std::polar(1.0, 2.0 * pi * j / 256))));
    return M * std::pow(rho, K + 1) / (1.0 - rho);
}

TaylorResult matrix_function_taylor(const Tridiag& T, double alpha, int K) {
    if (K < 0) throw std::invalid_argument("matrix_function_taylor: order must be >= 0");
    const double r = shifted_norm_bound(T, alpha);
    if (!(r < alpha + pi * pi))
        throw NumericalError("matrix_function_taylor: spectrum not inside |z - alpha| < alpha + pi^2");
    const RecenteredSeries s = recentered_coeffs(alpha, K);
    const Eigen::Index n = T.dim();
    // Horner: P <- (T - alpha) P + a_k I, with the tridiagonal product done in O(n^2).
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) * s.coeffs[K];
    Eigen::MatrixXd Q(n, n);
    for (int k = K - 1; k >= 0; --k) {
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) {
                double v = (T.diag[i] - alpha) * P(i, j);
                if (i > 0) v += T.offdiag[i - 1] * P(i - 1, j);
                if (i + 1 < n) v += T.offdiag[i] * P(i + 1, j);
                Q(i, j) = v;
            }
        Q.diagonal().array() += s.coeffs[k];
        std::swap(P, Q);
    }
    TaylorResult out;
    out.value = (P + P.transpose()) / 2.0;
    out.alpha = alpha;
    out.K = K;
    out.remainder_bound = taylor_remainder_bound(T, alpha, K);
    return out;
}

TaylorPlan plan_taylor(const Tridiag& T, double tol, int K_max) {
    auto [lo, hi] = T.gershgorin();
    const double alpha = 0.5 * (std::max(hi, 0.0) + 1.0);
    const double r = std::max(std::abs(hi - alpha), std::abs(alpha - lo));
    const double rho = alpha + 0.5 * pi * pi;
    const double q = r / rho;
    if (!(q < 1.0)) throw NumericalError("plan_taylor: spectrum bound outside the convergence disk");
    // Cauchy estimate |a_k| <= M / rho^k, so the tail after K is <= M q^{K+1} / (1 - q).
    RecenteredSeries probe = recentered_coeffs(alpha, 0);
    const double M = probe.contour_max;
    int K = 1;
    while (K < K_max && M * std::pow(q, K + 1) / (1.0 - q) > tol) ++K;
    if (M * std::pow(q, K + 1) / (1.0 - q) > tol)
        throw NumericalError("plan_taylor: order cap " + std::to_string(K_max) + " too small for tolerance");
    TaylorPlan plan;
    plan.series = recentered_coeffs(alpha, K);
    plan.K = K;
    plan.tail_estimate = M * std::pow(q, K + 1) / (1.0 - q);
    return plan;
}

Eigen::VectorXd taylor_diagonal(const Tridiag& T, const TaylorPlan& plan, const std::vector<Eigen::Index>& sites) {
    const Eigen::Index n = T.dim();
    const int K = plan.K;
    const double alpha = plan.series.alpha;
    const auto& c = plan.series.coeffs;
    const Eigen::Index W = 2 * K + 3;
    std::vector<double> a(W), b(W);
    Eigen::VectorXd out(static_cast<Eigen::Index>(sites.size()));
    for (std::size_t s = 0; s < sites.size(); ++s) {
        const Eigen::Index x = sites[s];
        if (x < 0 || x >= n) throw std::out_of_range("taylor_diagonal: site out of range");
        std::fill(a.begin(), a.end(), 0.0);
        std::fill(b.begin(), b.end(), 0.0);
        const Eigen::Index mid = K + 1;  // buffer slot of site x
        a[mid] = c[K];
        for (int j = K - 1; j >= 0; --j) {
            // j applications of (T - alpha) remain after this one.
            const Eigen::Index rad = std::min<Eigen::Index>(K - j, j);
            for (Eigen::Index d = -rad; d <= rad; ++d) {
                const Eigen::Index i = x + d;
                const Eigen::Index p = mid + d;
                if (i < 0 || i >= n) {
                    b[p] = 0.0;
                    continue;
                }
                double v = (T.diag[i] - alpha) * a[p];
                if (i > 0) v += T.offdiag[i - 1] * a[p - 1];
                if (i + 1 < n) v += T.offdiag[i] * a[p + 1];
                b[p] = v;
            }
            // entries beyond rad are never read again
            for (Eigen::Index d = rad + 1; d <= K - j + 1 && mid + d < W; ++d) {
                b[mid + d] = 0.0;
                b[mid - d] = 0.0;
            }
            b[mid] += c[j];
            std::swap(a, b);
        }
        out[static_cast<Eigen::Index>(s)] = a[mid];
    }
    return out;
}

Eigen::VectorXd taylor_diagonal(const Tridiag& T, const TaylorPlan& plan) {
    std::vector<Eigen::Index> sites(T.dim());
    for (Eigen::Index i = 0; i < T.dim(); ++i) sites[i] = i;
    return taylor_diagonal(T, plan, sites);
}

}  // namespace qhc
