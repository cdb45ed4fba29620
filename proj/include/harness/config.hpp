#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "harness/experiments.hpp"
#include "harness/kernel.hpp"
#include "harness/noise.hpp"
#include "harness/wall.hpp"

namespace harness {

// Flat dotted key=value configuration. Lines are `section.key = value`;
// '#' starts a comment; blank lines ignored. Serialization is sorted, so
// parse -> serialize -> parse is the identity on the key set.
class Config {
public:
    static Config parse_string(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& items() const { return kv_; }

    // Keys present in the config but not in `known`; used to reject typos.
    std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

    std::string serialize() const;
    std::uint64_t hash() const; // FNV-1a over serialize()

private:
    std::map<std::string, std::string> kv_;
};

// Model assembly from a config (sections kernel., noise., wall., run.).
// Throws Error(ConfigError) naming the offending key on bad values.
Kernel kernel_from_config(const Config& cfg);
NoiseSpec noise_from_config(const Config& cfg);
WallSpec wall_from_config(const Config& cfg);
GrowthConfig growth_from_config(const Config& cfg);

// Every key the CLI understands.
const std::vector<std::string>& known_config_keys();

} // namespace harness
