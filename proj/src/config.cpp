#include "harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <fstream>
#include <sstream>

#include "harness/errors.hpp"

namespace harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw Error(Errc::ConfigError, "config key '" + key + "': " + what);
}

} // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ConfigError,
                        "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(Errc::ConfigError,
                                     "config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) bad_key(key, "trailing characters in number");
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        bad_key(key, "not a number: " + it->second);
    }
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) bad_key(key, "trailing characters in integer");
        if (v < INT_MIN || v > INT_MAX) bad_key(key, "integer out of range");
        return static_cast<int>(v);
    } catch (const Error&) {
        throw;
    } catch (...) {
        bad_key(key, "not an integer: " + it->second);
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) bad_key(key, "trailing characters in integer");
        return static_cast<std::uint64_t>(v);
    } catch (const Error&) {
        throw;
    } catch (...) {
        bad_key(key, "not an unsigned integer: " + it->second);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    bad_key(key, "not a boolean: " + it->second);
}

std::vector<std::string> Config::unknown_keys(const std::vector<std::string>& known) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
    return out;
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t Config::hash() const {
    const std::string s = serialize();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Kernel kernel_from_config(const Config& cfg) {
    const int dim = cfg.get_int("kernel.dim", 3);
    const std::string type = cfg.get("kernel.type", "srw");
    if (type == "srw") return Kernel::srw(dim);
    if (type != "custom") bad_key("kernel.type", "expected 'srw' or 'custom'");
    // kernel.custom: semicolon-separated entries "c1,c2,...,cd:weight".
    const std::string text = cfg.get("kernel.custom", "");
    if (text.empty()) bad_key("kernel.custom", "required when kernel.type = custom");
    KernelSpec spec;
    spec.dim = dim;
    std::istringstream entries(text);
    std::string entry;
    int range = 0;
    while (std::getline(entries, entry, ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        const std::size_t colon = entry.find(':');
        if (colon == std::string::npos) bad_key("kernel.custom", "entry missing ':' in " + entry);
        Coord c{};
        std::istringstream coords(entry.substr(0, colon));
        std::string part;
        int a = 0;
        while (std::getline(coords, part, ',')) {
            if (a >= dim) bad_key("kernel.custom", "too many components in " + entry);
            try {
                c[a++] = std::stoi(trim(part));
            } catch (...) {
                bad_key("kernel.custom", "bad coordinate in " + entry);
            }
        }
        if (a != dim) bad_key("kernel.custom", "expected " + std::to_string(dim) + " components");
        double w = 0.0;
        try {
            w = std::stod(trim(entry.substr(colon + 1)));
        } catch (...) {
            bad_key("kernel.custom", "bad weight in " + entry);
        }
        spec.weights.emplace_back(c, w);
        range = std::max(range, l1_norm(c, dim));
    }
    spec.range = range;
    return Kernel::validate(spec);
}

NoiseSpec noise_from_config(const Config& cfg) {
    NoiseSpec spec;
    spec.family = family_from_name(cfg.get("noise.family", "gaussian"));
    spec.alpha = cfg.get_double("noise.alpha", 2.0);
    spec.sigma = cfg.get_double("noise.sigma", 1.0);
    spec.check();
    return spec;
}

WallSpec wall_from_config(const Config& cfg) {
    WallSpec spec;
    spec.family = wall_family_from_name(cfg.get("wall.family", "flat"));
    spec.theta = cfg.get_double("wall.theta", 1.0);
    spec.sigma = cfg.get_double("wall.sigma", 1.0);
    spec.level = cfg.get_double("wall.level", 0.0);
    spec.q_neginf = cfg.get_double("wall.q_neginf", 0.0);
    spec.check();
    return spec;
}

GrowthConfig growth_from_config(const Config& cfg) {
    GrowthConfig g;
    g.kernel = kernel_from_config(cfg);
    g.noise = noise_from_config(cfg);
    g.wall = wall_from_config(cfg);
    g.side = cfg.get_int("run.side", 27);
    g.replicates = cfg.get_int("run.replicates", 100);
    g.seed = cfg.get_u64("run.seed", 1);
    g.quenched = cfg.get_bool("run.quenched", false);
    g.threads = cfg.get_int("run.threads", 1);
    const std::string init = cfg.get("run.init", "zero");
    if (init == "zero")
        g.init = InitKind::ZeroJoinWall;
    else if (init == "level")
        g.init = InitKind::Level;
    else if (init == "free_level")
        g.init = InitKind::FreeLevel;
    else
        bad_key("run.init", "expected zero | level | free_level");
    g.level = cfg.get_double("run.level", 0.0);

    const int steps = cfg.get_int("run.steps", 256);
    if (steps < 1) bad_key("run.steps", "must be >= 1");
    const std::string mode = cfg.get("run.mode", "torus");
    if (mode != "torus" && mode != "exact") bad_key("run.mode", "expected torus | exact");
    const int v = g.kernel.range();
    if (mode == "exact" && g.side < 2 * v * steps + 1)
        throw Error(Errc::DomainTooSmall,
                    "run.mode = exact needs L > 2vn: side >= " + std::to_string(2 * v * steps + 1) +
                        ", got " + std::to_string(g.side));
    if (g.side < 2 * v + 1)
        throw Error(Errc::DomainTooSmall, "run.side smaller than kernel support");
    return g;
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "kernel.dim",     "kernel.type",      "kernel.custom",  "noise.family",
        "noise.alpha",    "noise.sigma",      "wall.family",    "wall.theta",
        "wall.sigma",     "wall.level",       "wall.q_neginf",  "run.side",
        "run.steps",      "run.replicates",   "run.seed",       "run.quenched",
        "run.threads",    "run.mode",         "run.init",       "run.level",
        "run.trials",     "run.r_override",   "sweep.kind",     "sweep.values",
    };
    return keys;
}

} // namespace harness
