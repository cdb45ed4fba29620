#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random number primitives. A value is a pure function of
// (key, counter), so coupled processes and parallel replicates can read
// the same noise without storing it.

namespace harness::rng {

// splitmix64 finalizer. Passes the usual statistical batteries when used
// as counter -> mix(counter).
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Odd multipliers for decorrelating the (time, site) counters.
inline constexpr std::uint64_t kTimeStride = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kSiteStride = 0xd1342543de82ef95ULL;

// Domain-separation tags. Wall and noise keys never collide (section keys
// differ before any mixing happens).
inline constexpr std::uint64_t kTagNoise = 0x6e6f697365ULL;     // "noise"
inline constexpr std::uint64_t kTagWall = 0x77616c6cULL;        // "wall"
inline constexpr std::uint64_t kTagReplicate = 0x726570ULL;     // "rep"
inline constexpr std::uint64_t kTagBootstrap = 0x626f6f74ULL;   // "boot"

// Derives an independent stream key from a master seed.
inline std::uint64_t derive(std::uint64_t master, std::uint64_t tag) {
    return mix(mix(master ^ tag) + tag);
}

inline std::uint64_t derive(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
    return mix(derive(master, tag) + kSiteStride * index);
}

// Per-step base key; per-site values are mix(base + kSiteStride * site).
inline std::uint64_t step_base(std::uint64_t stream_key, std::int64_t n) {
    return mix(stream_key + kTimeStride * static_cast<std::uint64_t>(n));
}

inline std::uint64_t site_hash(std::uint64_t base, std::uint64_t site) {
    return mix(base + kSiteStride * site);
}

// Uniform in the open interval (0,1); 53-bit resolution, never 0 or 1.
inline double to_unit(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Acklam's rational approximation to the standard normal quantile.
// Relative error below 1.2e-9 over (0,1); the central branch costs no
// transcendentals, which matters in the site loop.
double normal_quantile(double u);

// normal_quantile followed by one Halley step against erfc; absolute error
// near machine precision. Oracle-grade, not used in the sampling hot path.
double normal_quantile_refined(double u);

// Quantile of the symmetric stretched-exponential law with
// P(X > x) = exp(-(x/sigma)^alpha)/2 for x >= 0.
inline double stretched_exp_quantile(double u, double alpha, double sigma) {
    if (u < 0.5) return -sigma * std::pow(-std::log(2.0 * u), 1.0 / alpha);
    return sigma * std::pow(-std::log(2.0 * (1.0 - u)), 1.0 / alpha);
}

} // namespace harness::rng
