#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "harness/config.hpp"
#include "harness/errors.hpp"
#include "harness/experiments.hpp"
#include "harness/io.hpp"
#include "harness/properties.hpp"
#include "harness/walk_oracle.hpp"

namespace {

using namespace harness;

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitOracle = 4;
constexpr int kExitProperty = 5;
constexpr int kExitInsufficientGrowth = 6;

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case Errc::ConfigError:
        return kExitConfig;
    case Errc::InsufficientGrowth:
        return kExitInsufficientGrowth;
    default:
        return kExitValidation;
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::string from_manifest;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int replicates = 0;
    int threads = 0;
    std::string mode;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config) {
    auto* copt = cmd->add_option("--config", f.config_path, "config file (key = value lines)");
    if (needs_config && f.from_manifest.empty()) copt->required(false);
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--seed", f.seed, "master seed override")->each([&f](const std::string&) {
        f.seed_set = true;
    });
    cmd->add_option("--replicates", f.replicates, "replicate count override");
    cmd->add_option("--threads", f.threads, "worker thread count");
    cmd->add_option("--mode", f.mode, "domain mode: exact | torus")
        ->check(CLI::IsMember({"exact", "torus"}));
}

Config load_config(const CommonFlags& f) {
    Config cfg;
    if (!f.from_manifest.empty()) {
        Manifest m = read_manifest(f.from_manifest);
        cfg = Config::parse_string(m.config_text);
    } else if (!f.config_path.empty()) {
        cfg = Config::parse_file(f.config_path);
    } else {
        throw Error(Errc::ConfigError, "either --config or --from-manifest is required");
    }
    if (f.seed_set) cfg.set("run.seed", std::to_string(f.seed));
    if (f.replicates > 0) cfg.set("run.replicates", std::to_string(f.replicates));
    if (f.threads > 0) cfg.set("run.threads", std::to_string(f.threads));
    if (!f.mode.empty()) cfg.set("run.mode", f.mode);
    const auto unknown = cfg.unknown_keys(known_config_keys());
    if (!unknown.empty())
        throw Error(Errc::ConfigError, "unknown config key: " + unknown.front());
    return cfg;
}

std::string out_path(const CommonFlags& f, const std::string& name) {
    std::filesystem::create_directories(f.out_dir);
    return (std::filesystem::path(f.out_dir) / name).string();
}

void emit_manifest(const CommonFlags& f, const Config& cfg, const std::string& subcommand,
                   const std::vector<std::string>& outputs) {
    Manifest m;
    m.subcommand = subcommand;
    m.config_text = cfg.serialize();
    m.config_hash = cfg.hash();
    m.seed = cfg.get_u64("run.seed", 1);
    m.engine_version = kEngineVersion;
    for (const auto& p : outputs)
        m.outputs[std::filesystem::path(p).filename().string()] = fnv1a_file(p);
    write_manifest(out_path(f, "manifest.json"), m);
}

int cmd_simulate(const CommonFlags& f) {
    Config cfg = load_config(f);
    GrowthConfig g = growth_from_config(cfg);
    const auto times = geometric_times(cfg.get_int("run.steps", 256));
    GrowthCurve curve = estimate_growth(g, times);
    const std::string csv = out_path(f, "growth.csv");
    write_growth_csv(csv, curve);
    emit_manifest(f, cfg, "simulate", {csv});
    fmt::print("wrote {} ({} grid points, {} replicates, fingerprint {:016x})\n", csv,
               curve.times.size(), curve.replicates, curve.fingerprint);
    return 0;
}

int cmd_oracle_check(const CommonFlags& f) {
    Config cfg = load_config(f);
    const Kernel kernel = kernel_from_config(cfg);
    const int d = kernel.dim();
    const int spikes = cfg.get_int("run.trials", 10);
    const int n_max = std::min(cfg.get_int("run.steps", 100), 100);
    const std::uint64_t seed = cfg.get_u64("run.seed", 1);
    const double tol = 1e-10;

    // Engine nu recursion vs the first-return closed form, single spike at 0.
    double worst = 0.0;
    int worst_n = 0;
    std::size_t worst_site = 0;
    const int v = kernel.range();
    ReturnSum rs = return_sum(kernel, std::max(2000, n_max + 1));
    const double a_upper = std::min(1.0, rs.a_n + rs.tail);
    struct OracleTables {
        Field cumulative;
        int radius = 0;
        double p_sum = 0.0; // sum_{k <= n+1} p_k^{0}(0,0)
    };
    std::map<int, OracleTables> cache;
    for (int s = 0; s < spikes; ++s) {
        const int n = s % 5 == 0 ? n_max : std::min(25, n_max);
        const int side = 2 * v * n + 1;
        const double spike =
            10.0 * rng::to_unit(rng::mix(rng::derive(seed, rng::kTagReplicate, s)));
        Field wall(d, side, kNegInf);
        wall[0] = spike;
        Field nu = run_nu(kernel, wall, n);
        auto it = cache.find(n);
        if (it == cache.end()) {
            FirstReturnDP dp(kernel, n + 1);
            dp.run_to(n);
            OracleTables tab;
            tab.cumulative = dp.cumulative();
            tab.radius = dp.radius();
            dp.step();
            for (double p : dp.origin_returns()) tab.p_sum += p;
            it = cache.emplace(n, std::move(tab)).first;
        }
        for (std::size_t i = 0; i < nu.size(); ++i) {
            Coord c = nu.coords(i);
            for (int a = 0; a < d; ++a) c[a] = centered(c[a], side) + it->second.radius;
            const double want =
                i == 0 ? spike : spike * it->second.cumulative[it->second.cumulative.index(c)];
            const double diff = std::fabs(nu[i] - want);
            if (diff > worst) {
                worst = diff;
                worst_n = n;
                worst_site = i;
            }
        }
        const double p_nu = spike * it->second.p_sum;
        if (p_nu > (a_upper + tol) * spike) {
            fmt::print(stderr, "oracle mismatch: P.nu_n(0) = {} exceeds a W = {}\n", p_nu,
                       a_upper * spike);
            return kExitOracle;
        }
    }
    if (worst > tol) {
        fmt::print(stderr, "oracle mismatch: nu engine vs closed form, worst {} at n={} site={}\n",
                   worst, worst_n, worst_site);
        return kExitOracle;
    }
    if (d >= 3 && rs.a_n + rs.tail >= 1.0) {
        fmt::print(stderr, "oracle mismatch: return-sum bracket [{}, {}] not below 1 in d={}\n",
                   rs.a_n, rs.a_n + rs.tail, d);
        return kExitOracle;
    }
    fmt::print("oracle-check pass: worst nu deviation {}, return sum in [{}, {}]\n", worst,
               rs.a_n, rs.a_n + rs.tail);
    return 0;
}

int cmd_property_check(const CommonFlags& f, int trials, bool mutant) {
    Config cfg = load_config(f);
    if (trials == 0) {
        fmt::print("warning: trials=0, vacuous pass\n");
        return 0;
    }
    PropertyOptions opt;
    opt.dim = cfg.get_int("kernel.dim", 3);
    const int v = kernel_from_config(cfg).range();
    opt.steps = std::min(cfg.get_int("run.steps", 50), 50);
    opt.side = cfg.get_int("run.side", 2 * v * opt.steps + 1);
    opt.trials = trials;
    opt.seed = cfg.get_u64("run.seed", 1);
    opt.noise = noise_from_config(cfg);
    if (cfg.has("wall.family")) opt.wall = wall_from_config(cfg);
    opt.mutant_drop_wall = mutant;
    const auto results = run_all_properties(opt);
    int bad = 0;
    for (const auto& r : results) {
        fmt::print("{:<24} trials={} violations={} worst={}\n", r.name, r.trials, r.violations,
                   r.worst);
        if (!r.passed()) {
            if (bad == 0)
                fmt::print(stderr, "property violated: {} at {}\n", r.name, r.first_violation);
            ++bad;
        }
    }
    return bad == 0 ? 0 : kExitProperty;
}

int cmd_fit(const CommonFlags& f, const std::string& csv_path) {
    GrowthCurve curve = read_growth_csv(csv_path);
    ExponentFit fit = fit_exponent(curve, curve.fingerprint);
    const std::string out = out_path(f, "fit.json");
    write_fit_json(out, fit);
    fmt::print("{}", fit_to_json(fit));
    return 0;
}

int cmd_sweep(const CommonFlags& f) {
    Config cfg = load_config(f);
    const std::string kind = cfg.get("sweep.kind", "upper_k");
    std::vector<double> values;
    {
        std::string text = cfg.get("sweep.values", "1,2,4");
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            values.push_back(std::stod(text.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    const Kernel kernel = kernel_from_config(cfg);
    const NoiseSpec noise = noise_from_config(cfg);
    const WallSpec wall = wall_from_config(cfg);
    const int side = cfg.get_int("run.side", 27);
    const int steps = cfg.get_int("run.steps", 256);
    const int reps = cfg.get_int("run.replicates", 100);
    const std::uint64_t seed = cfg.get_u64("run.seed", 1);

    const std::string csv = out_path(f, "sweep.csv");
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw Error(Errc::ConfigError, "cannot open output file: " + csv);
    if (kind == "upper_k") {
        const double r_override = cfg.get_double("run.r_override", -1.0);
        out << "n,K,a_n,r_n,p_exceed,p_decouple,p_running_max,domination_violations\n";
        for (double K : values) {
            auto rep = upper_bound_experiment(kernel, noise, wall, side, steps, K, reps, seed,
                                              r_override);
            out << fmt::format("{},{},{},{},{},{},{},{}\n", steps, K, rep.a_n, rep.r_n,
                               rep.p_exceed, rep.p_decouple, rep.p_running_max,
                               rep.domination_violations);
        }
    } else if (kind == "mu_c0") {
        auto rep = mu_recursion_check(kernel, noise, wall, side, steps, reps, seed, values);
        out << "c0,holds\n";
        for (std::size_t i = 0; i < rep.c0_values.size(); ++i)
            out << fmt::format("{},{}\n", rep.c0_values[i], rep.c0_holds[i] ? 1 : 0);
        fmt::print("q = {}, smallest passing C0 = {}, largest passing C0 = {}\n", rep.q,
                   rep.smallest_passing_c0, rep.largest_passing_c0);
    } else {
        throw Error(Errc::ConfigError, "config key 'sweep.kind': expected upper_k | mu_c0");
    }
    out.close();
    emit_manifest(f, cfg, "sweep", {csv});
    fmt::print("wrote {}\n", csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial harness process simulator"};
    app.require_subcommand(1);

    CommonFlags f;
    int trials = 100;
    bool mutant = false;
    std::string fit_csv;

    auto* sim = app.add_subcommand("simulate", "run a growth-curve simulation");
    add_common(sim, f, true);
    sim->add_option("--from-manifest", f.from_manifest, "replay a recorded run");

    auto* oracle = app.add_subcommand("oracle-check", "engine vs closed-form oracles");
    add_common(oracle, f, true);

    auto* prop = app.add_subcommand("property-check", "pathwise inequality suites");
    add_common(prop, f, true);
    prop->add_option("--trials", trials, "instances per suite");
    prop->add_flag("--mutant", mutant, "drop the wall in one process (self-test fixture)")
        ->group("");

    auto* fit = app.add_subcommand("fit", "fit the growth exponent from a curve CSV");
    add_common(fit, f, false);
    fit->add_option("--csv", fit_csv, "growth curve CSV")->required();

    auto* sweep = app.add_subcommand("sweep", "parameter sweeps (upper-bound K, mu-recursion C0)");
    add_common(sweep, f, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(f);
        if (oracle->parsed()) return cmd_oracle_check(f);
        if (prop->parsed()) return cmd_property_check(f, trials, mutant);
        if (fit->parsed()) return cmd_fit(f, fit_csv);
        if (sweep->parsed()) return cmd_sweep(f);
    } catch (const harness::Error& e) {
        fmt::print(stderr, "error [{}]: {}\n", errc_name(e.code()), e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitValidation;
    }
    return 0;
}
