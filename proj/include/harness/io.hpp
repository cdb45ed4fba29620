#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "harness/experiments.hpp"

namespace harness {

// CSV and manifest plumbing for the CLI. Floats are written as shortest
// round-trip decimals; infinities as "inf"/"-inf".

std::string format_value(double x);

// Columns: n,mean,se,replicates. One row per grid time.
void write_growth_csv(const std::string& path, const GrowthCurve& curve);

// Reads a growth-curve CSV back (samples are not stored in CSV, so bootstrap
// on a loaded curve is parametric).
GrowthCurve read_growth_csv(const std::string& path);

std::string fit_to_json(const ExponentFit& fit);
void write_fit_json(const std::string& path, const ExponentFit& fit);

// Reproducibility sidecar: everything needed to replay a run byte-for-byte.
struct Manifest {
    std::string subcommand;
    std::string config_text;            // exact serialized config used
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string engine_version;
    std::map<std::string, std::uint64_t> outputs; // path -> FNV-1a of bytes
};

std::uint64_t fnv1a_file(const std::string& path);

void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);

inline constexpr const char* kEngineVersion = "1.0.0";

} // namespace harness
