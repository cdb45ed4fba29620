#pragma once

#include <stdexcept>
#include <string>

namespace harness {

// Every named failure mode in the library maps to one of these codes.
enum class Errc {
    NonStochastic,
    Asymmetric,
    RangeViolation,
    NotFullDimensional,
    InfiniteValue,
    RadiusTooSmall,
    DomainTooSmall,
    MismatchedConfigs,
    NonpositiveSpike,
    InsufficientGrowth,
    AlphaOutOfRange,
    ConfigError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NonStochastic: return "NonStochastic";
    case Errc::Asymmetric: return "Asymmetric";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::NotFullDimensional: return "NotFullDimensional";
    case Errc::InfiniteValue: return "InfiniteValue";
    case Errc::RadiusTooSmall: return "RadiusTooSmall";
    case Errc::DomainTooSmall: return "DomainTooSmall";
    case Errc::MismatchedConfigs: return "MismatchedConfigs";
    case Errc::NonpositiveSpike: return "NonpositiveSpike";
    case Errc::InsufficientGrowth: return "InsufficientGrowth";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace harness
