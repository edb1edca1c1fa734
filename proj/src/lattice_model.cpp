#include "qhchain/lattice_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qhc {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = a ^ (index * 0xD1B54A32D192ED03ULL);
    splitmix64(t);
    return splitmix64(t);
}

// ---- MassLaw ----

void MassLaw::validate() const {
    if (!(m_min > 0.0) || !std::isfinite(m_min))
        throw ValidationError("mass.min", "must be a finite positive number");
    if (!(m_max >= m_min) || !std::isfinite(m_max))
        throw ValidationError("mass.max", "must be finite and >= mass.min");
    if (kind == Kind::custom) {
        if (!density_table.empty()) {
            if (density_table.size() < 2)
                throw ValidationError("mass.density", "table needs at least 2 samples");
            for (double v : density_table)
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw ValidationError("mass.density", "samples must be finite and >= 0");
        }
        if (!degenerate() && !(raw_mass() > 0.0))
            throw ValidationError("mass.density", "density has zero mass");
    }
}

double MassLaw::raw_density(double m) const {
    if (m < m_min || m > m_max) return 0.0;
    const double s = degenerate() ? 0.0 : (2.0 * m - m_min - m_max) / (m_max - m_min);
    if (kind == Kind::uniform) return 1.0;
    if (density_table.empty()) {
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - s * s));
    }
    const double u = 0.5 * (s + 1.0) * static_cast<double>(density_table.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), density_table.size() - 2);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * density_table[i] + w * density_table[i + 1];
}

namespace {
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}
}  // namespace

double MassLaw::raw_mass() const {
    if (degenerate()) return 1.0;
    return simpson([&](double m) { return raw_density(m); }, m_min, m_max, 4000);
}

double MassLaw::density(double m) const { return raw_density(m) / raw_mass(); }

double MassLaw::mean() const {
    if (degenerate()) return m_min;
    if (kind == Kind::uniform) return 0.5 * (m_min + m_max);
    return simpson([&](double m) { return m * raw_density(m); }, m_min, m_max, 4000) / raw_mass();
}

double MassLaw::variance() const {
    if (degenerate()) return 0.0;
    if (kind == Kind::uniform) return (m_max - m_min) * (m_max - m_min) / 12.0;
    const double mu = mean();
    return simpson([&](double m) { return (m - mu) * (m - mu) * raw_density(m); }, m_min, m_max, 4000) /
           raw_mass();
}

double MassLaw::sample(Rng& rng) const {
    if (degenerate()) return m_min;
    const double span = m_max - m_min;
    if (kind == Kind::uniform) return m_min + span * rng.uniform();
    double peak;
    if (density_table.empty())
        peak = std::exp(-1.0);
    else
        peak = *std::max_element(density_table.begin(), density_table.end());
    for (;;) {
        const double m = m_min + span * rng.uniform();
        if (rng.uniform() * peak < raw_density(m)) return m;
    }
}

// ---- Profile ----

double Profile::operator()(double y) const {
    using std::numbers::pi;
    switch (kind) {
        case Kind::constant: return offset;
        case Kind::sine: return offset + amplitude * std::sin(frequency * pi * y);
        case Kind::cosine: return offset + amplitude * std::cos(frequency * pi * y);
        case Kind::bump: {
            const double s = (y - center) / width;
            if (std::abs(s) >= 1.0) return offset;
            return offset + amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
        }
        case Kind::table: {
            const double u = std::clamp(y, 0.0, 1.0) * static_cast<double>(table.size() - 1);
            const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), table.size() - 2);
            const double w = u - static_cast<double>(i);
            return (1.0 - w) * table[i] + w * table[i + 1];
        }
    }
    return 0.0;
}

Profile Profile::constant(double c) {
    Profile p;
    p.offset = c;
    return p;
}

Profile Profile::sine(double amplitude, double frequency, double offset) {
    Profile p;
    p.kind = Kind::sine;
    p.amplitude = amplitude;
    p.frequency = frequency;
    p.offset = offset;
    return p;
}

Profile Profile::cosine(double amplitude, double frequency, double offset) {
    Profile p = sine(amplitude, frequency, offset);
    p.kind = Kind::cosine;
    return p;
}

Profile Profile::bump(double amplitude, double center, double width, double offset) {
    Profile p;
    p.kind = Kind::bump;
    p.amplitude = amplitude;
    p.center = center;
    p.width = width;
    p.offset = offset;
    return p;
}

Profile Profile::tabulated(std::vector<double> samples) {
    Profile p;
    p.kind = Kind::table;
    p.table = std::move(samples);
    return p;
}

// ---- ChainSpec ----

std::pair<double, double> ChainSpec::beta_range() const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto visit = [&](double y) {
        const double b = beta(y);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    };
    for (int x = 1; x <= n; ++x) visit(static_cast<double>(x) / n);
    for (int i = 0; i <= 1000; ++i) visit(i / 1000.0);
    return {lo, hi};
}

namespace {
void validate_profile(const Profile& p, const std::string& key) {
    if (p.kind == Profile::Kind::table && p.table.size() < 2)
        throw ValidationError(key + ".values", "table needs at least 2 samples");
    if (p.kind == Profile::Kind::bump && !(p.width > 0.0))
        throw ValidationError(key + ".width", "must be > 0");
}
}  // namespace

void ChainSpec::validate() const {
    if (n < 2) throw ValidationError("n", "site count must be >= 2");
    mass_law.validate();
    validate_profile(beta, "beta");
    validate_profile(pbar, "pbar");
    validate_profile(rbar, "rbar");
    auto [lo, hi] = beta_range();
    if (!(lo > 0.0) || !std::isfinite(hi)) {
        std::ostringstream os;
        os << "inverse temperature must stay positive, minimum is " << lo;
        throw ValidationError("beta", os.str());
    }
    if (std::abs(rbar(0.0)) > 1e-12 || std::abs(rbar(1.0)) > 1e-12)
        throw ValidationError("rbar", "elongation profile must vanish at y=0 and y=1");
    if (!(hbar >= 0.0)) throw ValidationError("hbar", "must be >= 0");
}

// ---- sampling and discretization ----

DisorderRealization sample_masses(const ChainSpec& spec, std::uint64_t seed) {
    if (spec.n < 2) throw ValidationError("n", "site count must be >= 2");
    spec.mass_law.validate();
    Rng rng(seed);
    DisorderRealization r;
    r.seed = seed;
    r.masses.resize(spec.n);
    for (int i = 0; i < spec.n; ++i) r.masses[i] = spec.mass_law.sample(rng);
    return r;
}

DisorderRealization sample_realization(const ChainSpec& spec, std::uint64_t base, std::uint64_t index) {
    return sample_masses(spec, derive_seed(base, index));
}

DisorderRealization make_realization(Eigen::VectorXd masses, std::uint64_t seed) {
    if (masses.size() < 2) throw ValidationError("n", "site count must be >= 2");
    if (!(masses.minCoeff() > 0.0)) throw ValidationError("mass", "masses must be positive");
    DisorderRealization r;
    r.seed = seed;
    r.masses = std::move(masses);
    return r;
}

DiscretizedProfiles discretize_profiles(const ChainSpec& spec, int n) {
    DiscretizedProfiles d;
    d.beta.resize(n);
    d.pbar.resize(n);
    d.rbar.resize(n - 1);
    for (int x = 1; x <= n; ++x) {
        const double y = static_cast<double>(x) / n;
        d.beta[x - 1] = spec.beta(y);
        d.pbar[x - 1] = spec.pbar(y);
        if (x < n) d.rbar[x - 1] = spec.rbar(y);
    }
    return d;
}

DiscretizedProfiles equilibrium_profiles(int n, double beta) {
    DiscretizedProfiles d;
    d.beta = Eigen::VectorXd::Constant(n, beta);
    d.pbar = Eigen::VectorXd::Zero(n);
    d.rbar = Eigen::VectorXd::Zero(n - 1);
    return d;
}

// ---- operators ----

std::pair<Tridiag, Tridiag> build_dynamics_operators(const DisorderRealization& real) {
    const Eigen::VectorXd& m = real.masses;
    const Eigen::Index n = m.size();
    Eigen::VectorXd dp(n), ep(n - 1), dr(n - 1), er(std::max<Eigen::Index>(n - 2, 0));
    for (Eigen::Index x = 0; x < n; ++x) dp[x] = (x == 0 || x == n - 1 ? 1.0 : 2.0) / m[x];
    for (Eigen::Index x = 0; x + 1 < n; ++x) {
        ep[x] = -1.0 / std::sqrt(m[x] * m[x + 1]);
        dr[x] = 1.0 / m[x] + 1.0 / m[x + 1];
    }
    for (Eigen::Index x = 0; x + 2 < n; ++x) er[x] = -1.0 / m[x + 1];
    return {Tridiag(dp, ep), Tridiag(dr, er)};
}

std::pair<Tridiag, Tridiag> build_gibbs_operators(const DisorderRealization& real,
                                                  const DiscretizedProfiles& prof) {
    const Eigen::VectorXd& m = real.masses;
    const Eigen::VectorXd& b = prof.beta;
    const Eigen::Index n = m.size();
    if (b.size() != n) throw std::invalid_argument("build_gibbs_operators: beta/mass size mismatch");
    if (!(b.minCoeff() > 0.0)) throw ValidationError("beta", "inverse temperature must be positive");
    Eigen::VectorXd dp(n), ep(n - 1), dr(n - 1), er(std::max<Eigen::Index>(n - 2, 0));
    // A_p = D L D with L the weighted free Laplacian (bond weights beta_1..beta_{n-1}), D = sqrt(beta/m).
    for (Eigen::Index x = 0; x < n; ++x) {
        const double left = x > 0 ? b[x - 1] : 0.0;
        const double right = x + 1 < n ? b[x] : 0.0;
        dp[x] = b[x] * (left + right) / m[x];
    }
    for (Eigen::Index x = 0; x + 1 < n; ++x) {
        ep[x] = -b[x] * std::sqrt(b[x] * b[x + 1] / (m[x] * m[x + 1]));
        dr[x] = b[x] * (b[x] / m[x] + b[x + 1] / m[x + 1]);
    }
    for (Eigen::Index x = 0; x + 2 < n; ++x) er[x] = -std::sqrt(b[x] * b[x + 1]) * b[x + 1] / m[x + 1];
    return {Tridiag(dp, ep), Tridiag(dr, er)};
}

Eigen::VectorXd grad_plus(const Eigen::VectorXd& f) {
    const Eigen::Index n = f.size();
    return f.tail(n - 1) - f.head(n - 1);
}

Eigen::VectorXd grad_minus(const Eigen::VectorXd& g) {
    const Eigen::Index n = g.size() + 1;
    Eigen::VectorXd out(n);
    for (Eigen::Index x = 0; x < n; ++x) out[x] = (x < n - 1 ? g[x] : 0.0) - (x > 0 ? g[x - 1] : 0.0);
    return out;
}

Eigen::MatrixXd grad_plus_matrix(int n) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n - 1, n);
    for (int x = 0; x + 1 < n; ++x) {
        G(x, x) = -1.0;
        G(x, x + 1) = 1.0;
    }
    return G;
}

}  // namespace qhc
