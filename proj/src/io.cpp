#include "harness/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "harness/errors.hpp"

namespace harness {

std::string format_value(double x) { return fmt::format("{}", x); }

void write_growth_csv(const std::string& path, const GrowthCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ConfigError, "cannot open output file: " + path);
    out << "n,mean,se,replicates\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i)
        out << fmt::format("{},{},{},{}\n", curve.times[i], curve.mean[i], curve.se[i],
                           curve.replicates);
    if (!out) throw Error(Errc::ConfigError, "write failed: " + path);
}

GrowthCurve read_growth_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::ConfigError, "empty CSV: " + path);
    {
        std::istringstream hdr(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(hdr, col, ',')) cols.push_back(col);
        if (cols.size() < 3 || cols[0] != "n" || cols[1] != "mean" || cols[2] != "se")
            throw Error(Errc::ConfigError, "CSV must have columns n,mean,se[,replicates]");
    }
    GrowthCurve curve;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3)
            throw Error(Errc::ConfigError,
                        "CSV line " + std::to_string(lineno) + ": expected >= 3 columns");
        try {
            curve.times.push_back(std::stoi(cells[0]));
            curve.mean.push_back(std::stod(cells[1]));
            curve.se.push_back(std::stod(cells[2]));
            if (cells.size() > 3) curve.replicates = std::stoi(cells[3]);
        } catch (...) {
            throw Error(Errc::ConfigError, "CSV line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (curve.times.empty()) throw Error(Errc::ConfigError, "CSV has no data rows: " + path);
    return curve;
}

std::string fit_to_json(const ExponentFit& fit) {
    nlohmann::ordered_json j;
    j["gamma_inv"] = fit.gamma_inv;
    j["c"] = fit.c;
    j["r2"] = fit.r2;
    j["window_lo"] = fit.window_lo;
    j["window_hi"] = fit.window_hi;
    j["ci_lo"] = fit.ci_lo;
    j["ci_hi"] = fit.ci_hi;
    j["resamples"] = fit.resamples;
    return j.dump(2) + "\n";
}

void write_fit_json(const std::string& path, const ExponentFit& fit) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ConfigError, "cannot open output file: " + path);
    out << fit_to_json(fit);
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ConfigError, "cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

void write_manifest(const std::string& path, const Manifest& m) {
    nlohmann::ordered_json j;
    j["subcommand"] = m.subcommand;
    j["config_text"] = m.config_text;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["engine_version"] = m.engine_version;
    nlohmann::ordered_json outs = nlohmann::ordered_json::object();
    for (const auto& [p, h] : m.outputs) outs[p] = h;
    j["outputs"] = outs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ConfigError, "cannot open manifest file: " + path);
    out << j.dump(2) << "\n";
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ConfigError, "cannot open manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(Errc::ConfigError, std::string("bad manifest JSON: ") + e.what());
    }
    Manifest m;
    try {
        m.subcommand = j.at("subcommand").get<std::string>();
        m.config_text = j.at("config_text").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::uint64_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.engine_version = j.value("engine_version", std::string{});
        if (j.contains("outputs"))
            for (const auto& [k, v] : j.at("outputs").items())
                m.outputs[k] = v.get<std::uint64_t>();
    } catch (const std::exception& e) {
        throw Error(Errc::ConfigError, std::string("manifest missing field: ") + e.what());
    }
    return m;
}

} // namespace harness
