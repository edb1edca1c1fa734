// Command-line driver: one subcommand per experiment, CSV outputs plus a JSON manifest.

#include "qhchain/config.hpp"
#include "qhchain/dynamics.hpp"
#include "qhchain/errors.hpp"
#include "qhchain/euler_pde.hpp"
#include "qhchain/gibbs_state.hpp"
#include "qhchain/hydro_bench.hpp"
#include "qhchain/io.hpp"
#include "qhchain/localization.hpp"
#include "qhchain/parallel.hpp"
#include "qhchain/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/version.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <utility>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qhc;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string command;
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool classical = false;
    std::optional<double> exponent;
};

struct Run {
    Options opt;
    Config cfg;
    fs::path out;
    int threads = 1;
    std::vector<std::string> files;
    json results = json::object();

    std::string path(const std::string& name) {
        files.push_back(name);
        return (out / name).string();
    }
};

std::string run_id(const std::string& command, const std::string& config) {
    // FNV-1a over command and canonical config, printed like a short commit hash.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : command + "\n" + config) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

DisorderRealization realization(const ChainSpec& spec) { return sample_realization(spec, spec.seed, 0); }

void cmd_spectrum(Run& run) {
    const ChainSpec spec = chain_spec_from(run.cfg);
    const auto real = realization(spec);
    const auto [Ap, Ar] = build_dynamics_operators(real);
    const ModeBasis basis = build_mode_basis(Ap, real);
    const auto chk = check_mode_basis(basis, Ap, Ar, real, Eigen::VectorXd());
    CsvWriter out(run.path("spectrum.csv"), {"k", "omega", "participation_ratio"});
    for (Eigen::Index k = 0; k < basis.dim(); ++k)
        out.row(static_cast<long>(k), basis.frequencies[k], participation_ratio(basis.momentum.col(k)));
    out.close();
    write_mode_basis_csv(run.path("modes.csv"), basis);
    const auto rep = localization_report(basis, real.masses, run.cfg.get_double("alpha", 0.25),
                                         run.cfg.get_double("eta", 0.6), run.cfg.get_double("eps", 1e-3));
    write_localization_csv(run.path("localization.csv"), rep);
    run.results = {{"residual", chk.residual},       {"orthonormality", chk.orthonormality},
                   {"link", chk.link},               {"used_fallback", basis.used_fallback},
                   {"pass_fraction", rep.pass_fraction}};
}

void cmd_thermal(Run& run) {
    const ChainSpec spec = chain_spec_from(run.cfg);
    const auto real = realization(spec);
    const auto prof = discretize_profiles(spec, spec.n);
    const bool classical = run.cfg.get_bool("classical", false);
    const GaussianState st = locally_gibbs_state(real, prof, spec.mass_law.mean(), classical);
    write_state_csv(run.path("state.csv"), st, real);
    const Eigen::VectorXd e = site_thermal_energies(st, real);
    run.results = {{"mean_thermal_energy", e.mean()}, {"total_momentum", total_momentum(st)}};
}

void cmd_evolve(Run& run) {
    const ChainSpec spec = chain_spec_from(run.cfg);
    const auto real = realization(spec);
    const auto prof = discretize_profiles(spec, spec.n);
    const bool classical = run.cfg.get_bool("classical", false);
    const int steps = run.cfg.get_int("evolve.steps", 10);
    const double t_max = run.cfg.get_double("evolve.t_max", 1.0);
    if (steps < 1) throw ValidationError("evolve.steps", run.cfg.where("evolve.steps") + ": must be >= 1");
    if (!(t_max >= 0)) throw ValidationError("evolve.t_max", run.cfg.where("evolve.t_max") + ": must be >= 0");
    std::vector<double> times;
    for (int i = 0; i <= steps; ++i) times.push_back(t_max * i / steps);
    const GaussianState st0 = locally_gibbs_state(real, prof, spec.mass_law.mean(), classical);
    const EvolutionPlan plan =
        make_evolution_plan(real, times, run.cfg.get_double("time_scale_exponent", 1.0));
    const ModeCoordinates c0 = to_mode_coordinates(st0, plan);
    const Conserved q0 = conserved_quantities(st0, real);
    const double P0 = total_momentum(st0);
    CsvWriter traj(run.path("trajectory.csv"), {"t", "x", "mean_p", "mean_r", "thermal_energy"});
    CsvWriter drift(run.path("drift.csv"), {"t", "H", "I", "momentum", "H_rel_drift", "I_rel_drift"});
    double max_drift = 0;
    for (double t : times) {
        const ModeCoordinates ct = evolve(c0, plan, t);
        const GaussianState s = from_mode_coordinates(ModeCoordinates{ct.u, ct.v, {}, {}, {}}, plan);
        const Eigen::VectorXd th = thermal_energies(ct, plan);
        for (Eigen::Index x = 0; x < s.mean_p.size(); ++x)
            traj.row(t, static_cast<long>(x + 1), s.mean_p[x], x < s.mean_r.size() ? s.mean_r[x] : 0.0, th[x]);
        const Conserved q = conserved_quantities(s, real);
        const double dH = std::abs(q.H - q0.H) / std::max(1e-300, std::abs(q0.H));
        const double dI = std::abs(q.I - q0.I) / std::max(1e-300, std::abs(q0.I));
        max_drift = std::max({max_drift, dH, dI});
        drift.row(t, q.H, q.I, total_momentum(s), dH, dI);
    }
    traj.close();
    drift.close();
    run.results = {{"max_relative_drift", max_drift}, {"initial_momentum", P0}};
}

void cmd_localize(Run& run) {
    const ChainSpec spec = chain_spec_from(run.cfg);
    const auto real = realization(spec);
    const auto [Ap, Ar] = build_dynamics_operators(real);
    const ModeBasis basis = build_mode_basis(Ap, real);
    const auto rep = localization_report(basis, real.masses, run.cfg.get_double("alpha", 0.25),
                                         run.cfg.get_double("eta", 0.6), run.cfg.get_double("eps", 1e-3));
    write_localization_csv(run.path("localization.csv"), rep);
    run.results = {{"modes", rep.modes.size()},
                   {"passed", rep.passed},
                   {"pass_fraction", rep.pass_fraction},
                   {"width_threshold", rep.width_threshold},
                   {"mean_participation", rep.mean_participation},
                   {"omega_bound_constant", rep.omega_bound_constant},
                   {"width_omega_exponent", rep.width_omega_exponent}};
}

void cmd_cov_decay(Run& run) {
    CovDecayConfig c = cov_decay_config_from(run.cfg);
    c.threads = run.threads;
    const auto r = covariance_decay_experiment(c);
    CsvWriter out(run.path("cov_decay.csv"), {"distance", "cov", "stderr"});
    for (std::size_t i = 0; i < r.distance.size(); ++i) out.row(r.distance[i], r.cov[i], r.stderr_[i]);
    out.close();
    run.results = {{"C", r.C}, {"c", r.c}, {"floor", r.floor}, {"fit_points", r.fit_points},
                   {"stable", r.stable}, {"warning", r.warning}};
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
}

void cmd_slln(Run& run) {
    SllnConfig c = slln_config_from(run.cfg);
    c.threads = run.threads;
    const auto rows = slln_experiment(c);
    CsvWriter out(run.path("slln.csv"), {"n", "mean", "variance", "ratio"});
    for (const auto& r : rows) out.row(r.n, r.mean, r.variance, r.ratio);
    out.close();
}

void cmd_fmu(Run& run) {
    const ChainSpec spec = chain_spec_from(run.cfg);
    FmuOptions o = fmu_options_from(run.cfg);
    o.threads = run.threads;
    std::vector<double> betas = run.cfg.get_doubles("fmu.beta", {});
    if (betas.empty()) {
        const auto [lo, hi] = beta_bounds_from(run.cfg, spec);
        const int pts = run.cfg.get_int("fmu.points", 16);
        if (pts < 1) throw ValidationError("fmu.points", run.cfg.where("fmu.points") + ": must be >= 1");
        for (int i = 0; i < pts; ++i)
            betas.push_back(pts == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (pts - 1)));
    }
    for (double b : betas)
        if (!(b > 0)) throw ValidationError("fmu.beta", run.cfg.where("fmu.beta") + ": values must be > 0");
    CsvWriter out(run.path("fmu.csv"), {"beta", "f_mu", "stderr", "beta_f", "bin_spread"});
    for (double b : betas) {
        const FmuResult r = f_mu_estimate(spec.mass_law, b, o);
        double lo = r.bins.front().mean, hi = lo;
        for (const auto& e : r.bins) lo = std::min(lo, e.mean), hi = std::max(hi, e.mean);
        out.row(b, r.estimate.mean, r.estimate.stderr_, b * r.estimate.mean, hi - lo);
    }
    out.close();
}

void cmd_euler(Run& run) {
    const ChainSpec spec = chain_spec_from(run.cfg);
    const int modes = run.cfg.get_int("euler.modes", 64);
    const int ng = run.cfg.get_int("euler.grid", 201);
    if (modes < 1) throw ValidationError("euler.modes", run.cfg.where("euler.modes") + ": must be >= 1");
    if (ng < 2) throw ValidationError("euler.grid", run.cfg.where("euler.grid") + ": must be >= 2");
    const std::vector<double> times = run.cfg.get_doubles("times", {0.0, 0.25, 0.5});
    Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(ng, 0.0, 1.0);
    const double mbar = spec.mass_law.mean();
    MacroSolution sol = solve_wave_fourier([&](double y) { return spec.pbar(y); },
                                           [&](double y) { return spec.rbar(y); }, mbar, modes, grid, times);
    // Thermal part with the classical equilibrium value 1/beta unless an f-mu table is supplied by hydro.
    for (Eigen::Index i = 0; i < grid.size(); ++i) sol.fmu_profile[i] = 1.0 / spec.beta(grid[i]);
    sol.e_field = macro_energy(sol.r_field, sol.p_field, mbar, sol.fmu_profile);
    write_macro_csv(run.path("macro.csv"), sol);
    const WaveSolution w([&](double y) { return spec.rbar(y); }, [&](double y) { return spec.pbar(y); }, mbar, modes);
    run.results = {{"truncation_residual", w.truncation_residual()},
                   {"pde_residual", w.pde_residual(times.empty() ? 0.0 : times.back())}};
}

void cmd_hydro(Run& run) {
    HydroConfig h = hydro_config_from(run.cfg);
    h.threads = run.threads;
    const HydroResult r = hydrodynamic_convergence(h);
    write_convergence_csv(run.path("convergence.csv"), r.table);
    write_freezing_csv(run.path("freezing.csv"), r.freezing);
    CsvWriter hm(run.path("homogenization.csv"), {"n", "t", "test_function", "mean_abs_linear", "mean_abs_squared"});
    for (const auto& x : r.homogenization) hm.row(x.n, x.t, x.test_function, x.mean_abs_linear, x.mean_abs_squared);
    hm.close();
    CsvWriter ft(run.path("fmu_table.csv"), {"beta", "f_mu", "stderr"});
    for (std::size_t i = 0; i < r.fmu.betas().size(); ++i) ft.row(r.fmu.betas()[i], r.fmu.values()[i], r.fmu.stderrs()[i]);
    ft.close();
    run.results = {{"max_energy_density", r.max_energy_density}, {"rows", r.table.size()}};
}

int execute(const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Run run;
    run.opt = opt;
    run.cfg = opt.config_path.empty() ? Config::parse("", "<defaults>") : Config::load(opt.config_path);
    if (opt.seed) run.cfg.set("seed", std::to_string(*opt.seed));
    if (opt.classical) run.cfg.set("classical", "true");
    if (opt.exponent) run.cfg.set("time_scale_exponent", format_double(*opt.exponent));
    run.threads = resolve_threads(opt.threads > 0 ? opt.threads : run.cfg.get_int("threads", 0));
    run.out = opt.out_dir;
    fs::create_directories(run.out);

    const std::map<std::string, void (*)(Run&)> table{
        {"spectrum", cmd_spectrum}, {"thermal", cmd_thermal}, {"evolve", cmd_evolve},
        {"localize", cmd_localize}, {"cov-decay", cmd_cov_decay}, {"slln", cmd_slln},
        {"f-mu", cmd_fmu},          {"euler", cmd_euler},       {"hydro", cmd_hydro}};
    table.at(opt.command)(run);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string echo = run.cfg.dump();
    json m;
    m["run_id"] = run_id(opt.command, echo);
    m["command"] = opt.command;
    m["config_path"] = opt.config_path;
    json cfg = json::object();
    for (const auto& [k, e] : run.cfg.entries()) cfg[k] = e.value;
    m["config"] = cfg;
    m["seeds"] = {{"base", run.cfg.get_u64("seed", 1)}, {"derivation", "splitmix64(base, index)"}};
    m["threads"] = run.threads;
    m["versions"] = {{"qhchain", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION},
                     {"compiler", __VERSION__}};
    m["timing"] = {{"wall_seconds", wall}};
    m["outputs"] = run.files;
    m["results"] = run.results;
    write_file_atomic((run.out / "manifest.json").string(), m.dump(2) + "\n");
    std::cout << "wrote " << run.files.size() << " file(s) to " << run.out.string() << " (run " << m["run_id"].get<std::string>()
              << ", " << std::fixed << std::setprecision(2) << wall << " s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disordered quantum harmonic chain experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options opt;
    std::uint64_t seed = 0;
    double exponent = 1.0;
    const std::pair<const char*, const char*> commands[] = {
        {"spectrum", "eigenfrequencies, modes and mode supports of one realization"},
        {"thermal", "locally Gibbs state: means and site energies"},
        {"evolve", "evolve the state and record conserved-quantity drift"},
        {"localize", "support widths of the high modes"},
        {"cov-decay", "disorder covariance of site energies against distance"},
        {"slln", "variance of the weighted thermal sum over n"},
        {"f-mu", "equilibrium thermal energy density at one beta"},
        {"euler", "macroscopic wave solution and energy field"},
        {"hydro", "microscopic vs macroscopic convergence table"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "key = value configuration file");
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "base seed (overrides the config)");
        sub->add_option("--threads", opt.threads, "worker threads (default: QHCHAIN_THREADS or all cores)");
        sub->add_flag("--classical", opt.classical, "classical occupation (weight 1 for every mode)");
        sub->add_option("--time-scale-exponent", exponent, "time scale n^a; 1 = hyperbolic, 2 = diffusive");
        sub->callback([&opt, name] { opt.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--seed")) opt.seed = seed;
        if (sub->count("--time-scale-exponent")) opt.exponent = exponent;
    }
    try {
        return execute(opt);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
