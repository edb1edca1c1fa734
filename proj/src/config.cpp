#include "qhchain/config.hpp"

#include "qhchain/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace qhc {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k{"n",          "hbar",         "seed",          "mass.kind",      "mass.min",
                                "mass.max",   "mass.density", "beta.min",      "beta.max",       "n_values",
                                "realizations", "times",      "test_functions", "alpha",         "eta",
                                "eps",        "classical",    "time_scale_exponent", "threads",  "diffusive_check",
                                "fmu.n",      "fmu.realizations", "fmu.window_lo", "fmu.window_hi", "fmu.points",
                                "fmu.bins",   "fmu.route",    "fmu.beta",      "euler.modes",    "euler.grid",
                                "decay.realizations", "decay.d_max", "decay.anchors", "slln.n_values",
                                "slln.realizations", "slln.test_function", "evolve.steps", "evolve.t_max"};
        for (const char* p : {"beta", "pbar", "rbar"})
            for (const char* f : {"kind", "offset", "amplitude", "frequency", "center", "width", "values"})
                k.insert(std::string(p) + "." + f);
        return k;
    }();
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; });
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) continue;
        const auto loc = source + ":" + std::to_string(line);
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("", loc + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_key(key)) throw ValidationError(key, loc + ": malformed key");
        if (!known_keys().count(key)) throw ValidationError(key, loc + ": unknown key");
        if (value.empty()) throw ValidationError(key, loc + ": empty value");
        if (auto it = cfg.entries_.find(key); it != cfg.entries_.end())
            throw ValidationError(key, loc + ": duplicate key (first set on line " + std::to_string(it->second.line) + ")");
        cfg.entries_[key] = {value, line};
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ValidationError(key, "unknown key");
    entries_[key] = {value, 0};
}

std::string Config::where(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || it->second.line == 0) return source_;
    return source_ + ":" + std::to_string(it->second.line);
}

void Config::fail(const std::string& key, const std::string& what) const {
    throw ValidationError(key, where(key) + ": " + what);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.value;
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
        fail(key, "expected a finite number, got '" + v + "'");
    return d;
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.value;
    char* end = nullptr;
    errno = 0;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE || x < -2147483647L || x > 2147483647L)
        fail(key, "expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.value;
    char* end = nullptr;
    errno = 0;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE || v.front() == '-')
        fail(key, "expected a non-negative integer, got '" + v + "'");
    return x;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "expected true/false, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(it->second.value)) {
        char* end = nullptr;
        const double d = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0' || !std::isfinite(d)) fail(key, "bad list entry '" + item + "'");
        out.push_back(d);
    }
    return out;
}

std::vector<int> Config::get_ints(const std::string& key, std::vector<int> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<int> out;
    for (const auto& item : split_list(it->second.value)) {
        char* end = nullptr;
        const long x = std::strtol(item.c_str(), &end, 10);
        if (item.empty() || *end != '\0' || x < -2147483647L || x > 2147483647L)
            fail(key, "bad list entry '" + item + "'");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

std::vector<std::string> Config::get_strings(const std::string& key, std::vector<std::string> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    auto out = split_list(it->second.value);
    for (const auto& s : out)
        if (s.empty()) fail(key, "empty list entry");
    return out;
}

std::string Config::dump() const {
    std::ostringstream os;
    for (const auto& [k, e] : entries_) os << k << " = " << e.value << '\n';
    return os.str();
}

// ---- builders ----

ChainSpec default_chain_spec() {
    ChainSpec s;
    s.rbar = Profile::sine(0.5);
    s.pbar = Profile::cosine(0.5);
    s.beta = Profile::sine(0.5, 1.0, 1.0);
    return s;
}

namespace {

Profile profile_from(const Config& cfg, const std::string& p, const Profile& fallback) {
    const std::string kk = p + ".kind";
    if (!cfg.has(kk)) {
        for (const char* f : {"offset", "amplitude", "frequency", "center", "width", "values"})
            if (cfg.has(p + "." + f))
                throw ValidationError(p + "." + f, cfg.where(p + "." + f) + ": set " + kk + " as well");
        return fallback;
    }
    const std::string kind = cfg.get_string(kk, "");
    Profile out;
    const double offset = cfg.get_double(p + ".offset", 0.0);
    const double amp = cfg.get_double(p + ".amplitude", 0.0);
    const double freq = cfg.get_double(p + ".frequency", 1.0);
    if (kind == "constant") {
        out = Profile::constant(offset);
    } else if (kind == "sine") {
        out = Profile::sine(amp, freq, offset);
    } else if (kind == "cosine") {
        out = Profile::cosine(amp, freq, offset);
    } else if (kind == "bump") {
        out = Profile::bump(amp, cfg.get_double(p + ".center", 0.5), cfg.get_double(p + ".width", 0.25), offset);
    } else if (kind == "table") {
        if (!cfg.has(p + ".values")) throw ValidationError(p + ".values", cfg.where(kk) + ": table profile needs values");
        out = Profile::tabulated(cfg.get_doubles(p + ".values", {}));
    } else {
        throw ValidationError(kk, cfg.where(kk) + ": unknown profile kind '" + kind + "'");
    }
    return out;
}

// Re-raise a validation error with the location of its key.
template <typename F>
auto located(const Config& cfg, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        std::string k = e.key();
        if (!cfg.has(k) && cfg.has(k + ".kind")) k += ".kind";
        if (cfg.has(k) && std::string(e.what()).find(cfg.source()) == std::string::npos)
            throw ValidationError(e.key(), cfg.where(k) + ": " + std::string(e.what()).substr(e.key().size() + 2));
        throw;
    }
}

}  // namespace

ChainSpec chain_spec_from(const Config& cfg) {
    ChainSpec s = default_chain_spec();
    s.n = cfg.get_int("n", s.n);
    s.hbar = cfg.get_double("hbar", s.hbar);
    s.seed = cfg.get_u64("seed", s.seed);
    const std::string kind = cfg.get_string("mass.kind", "uniform");
    if (kind == "uniform") {
        s.mass_law.kind = MassLaw::Kind::uniform;
        if (cfg.has("mass.density"))
            throw ValidationError("mass.density", cfg.where("mass.density") + ": only used with mass.kind = custom");
    } else if (kind == "custom") {
        s.mass_law.kind = MassLaw::Kind::custom;
        s.mass_law.density_table = cfg.get_doubles("mass.density", {});
    } else {
        throw ValidationError("mass.kind", cfg.where("mass.kind") + ": expected uniform or custom, got '" + kind + "'");
    }
    s.mass_law.m_min = cfg.get_double("mass.min", s.mass_law.m_min);
    s.mass_law.m_max = cfg.get_double("mass.max", s.mass_law.m_max);
    s.beta = profile_from(cfg, "beta", s.beta);
    s.pbar = profile_from(cfg, "pbar", s.pbar);
    s.rbar = profile_from(cfg, "rbar", s.rbar);
    beta_bounds_from(cfg, s);
    located(cfg, [&] {
        s.validate();
        return 0;
    });
    return s;
}

std::pair<double, double> beta_bounds_from(const Config& cfg, const ChainSpec& spec) {
    if (!cfg.has("beta.min") && !cfg.has("beta.max")) return spec.beta_range();
    const double lo = cfg.get_double("beta.min", cfg.get_double("beta.max", 1.0));
    const double hi = cfg.get_double("beta.max", lo);
    if (!(lo > 0.0)) throw ValidationError("beta.min", cfg.where("beta.min") + ": must be > 0");
    if (!(hi >= lo)) throw ValidationError("beta.max", cfg.where("beta.max") + ": must be >= beta.min");
    return {lo, hi};
}

FmuOptions fmu_options_from(const Config& cfg) {
    FmuOptions o;
    o.n = cfg.get_int("fmu.n", o.n);
    o.realizations = cfg.get_int("fmu.realizations", o.realizations);
    o.window_lo = cfg.get_double("fmu.window_lo", o.window_lo);
    o.window_hi = cfg.get_double("fmu.window_hi", o.window_hi);
    o.bins = cfg.get_int("fmu.bins", o.bins);
    o.classical = cfg.get_bool("classical", false);
    o.seed = cfg.get_u64("seed", o.seed);
    const std::string route = cfg.get_string("fmu.route", "taylor");
    if (route == "taylor") o.route = ThermalRoute::taylor;
    else if (route == "spectral") o.route = ThermalRoute::spectral;
    else throw ValidationError("fmu.route", cfg.where("fmu.route") + ": expected taylor or spectral");
    if (o.n < 4) throw ValidationError("fmu.n", cfg.where("fmu.n") + ": must be >= 4");
    if (o.realizations < 1) throw ValidationError("fmu.realizations", cfg.where("fmu.realizations") + ": must be >= 1");
    if (!(0.0 < o.window_lo && o.window_lo < o.window_hi && o.window_hi <= 1.0))
        throw ValidationError("fmu.window_lo", cfg.where("fmu.window_lo") + ": need 0 < window_lo < window_hi <= 1");
    return o;
}

HydroConfig hydro_config_from(const Config& cfg) {
    HydroConfig h;
    h.spec = chain_spec_from(cfg);
    h.n_values = cfg.get_ints("n_values", h.n_values);
    h.realizations = cfg.get_int("realizations", h.realizations);
    h.macro_times = cfg.get_doubles("times", h.macro_times);
    for (const auto& id : cfg.get_strings("test_functions", {"one", "sin1", "cos1", "sin2"}))
        h.test_functions.push_back(located(cfg, [&] {
            try {
                return parse_test_function(id);
            } catch (const ValidationError&) {
                throw ValidationError("test_functions", cfg.where("test_functions") + ": unknown test function '" + id + "'");
            }
        }));
    h.alpha = cfg.get_double("alpha", h.alpha);
    h.classical = cfg.get_bool("classical", h.classical);
    h.time_scale_exponent = cfg.get_double("time_scale_exponent", h.time_scale_exponent);
    h.diffusive_check = cfg.get_bool("diffusive_check", h.diffusive_check);
    h.euler_modes = cfg.get_int("euler.modes", h.euler_modes);
    h.fmu_points = cfg.get_int("fmu.points", h.fmu_points);
    FmuOptions f = h.fmu;
    f.n = cfg.get_int("fmu.n", f.n);
    f.realizations = cfg.get_int("fmu.realizations", f.realizations);
    if (cfg.has("fmu.window_lo") || cfg.has("fmu.window_hi") || cfg.has("fmu.route") || cfg.has("fmu.bins")) {
        FmuOptions g = fmu_options_from(cfg);
        g.n = f.n;
        g.realizations = f.realizations;
        f = g;
    }
    h.fmu = f;
    if (h.fmu_points < 1) throw ValidationError("fmu.points", cfg.where("fmu.points") + ": must be >= 1");
    located(cfg, [&] {
        h.validate();
        return 0;
    });
    return h;
}

CovDecayConfig cov_decay_config_from(const Config& cfg) {
    CovDecayConfig c;
    c.spec = chain_spec_from(cfg);
    if (!cfg.has("n")) c.spec.n = 512;
    c.realizations = cfg.get_int("decay.realizations", c.realizations);
    c.d_max = cfg.get_int("decay.d_max", c.d_max);
    c.anchors = cfg.get_int("decay.anchors", c.anchors);
    c.classical = cfg.get_bool("classical", c.classical);
    if (c.realizations < 2)
        throw ValidationError("decay.realizations", cfg.where("decay.realizations") + ": must be >= 2");
    if (c.d_max < 1) throw ValidationError("decay.d_max", cfg.where("decay.d_max") + ": must be >= 1");
    if (c.anchors < 1) throw ValidationError("decay.anchors", cfg.where("decay.anchors") + ": must be >= 1");
    if (c.anchors + c.d_max > c.spec.n)
        throw ValidationError("decay.d_max", cfg.where("decay.d_max") + ": anchors + d_max exceeds n");
    return c;
}

SllnConfig slln_config_from(const Config& cfg) {
    SllnConfig s;
    s.spec = chain_spec_from(cfg);
    s.n_values = cfg.get_ints("slln.n_values", s.n_values);
    s.realizations = cfg.get_int("slln.realizations", s.realizations);
    const std::string g = cfg.get_string("slln.test_function", "one");
    try {
        s.g = parse_test_function(g);
    } catch (const ValidationError&) {
        throw ValidationError("slln.test_function", cfg.where("slln.test_function") + ": unknown test function '" + g + "'");
    }
    s.classical = cfg.get_bool("classical", s.classical);
    if (s.realizations < 2)
        throw ValidationError("slln.realizations", cfg.where("slln.realizations") + ": must be >= 2");
    for (std::size_t i = 0; i < s.n_values.size(); ++i)
        if (s.n_values[i] < 2 || (i && s.n_values[i] <= s.n_values[i - 1]))
            throw ValidationError("slln.n_values", cfg.where("slln.n_values") + ": sizes must be >= 2 and ascending");
    return s;
}

}  // namespace qhc
