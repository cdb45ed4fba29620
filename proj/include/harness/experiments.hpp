#pragma once

#include <cstdint>
#include <vector>

#include "harness/dynamics.hpp"
#include "harness/kernel.hpp"
#include "harness/noise.hpp"
#include "harness/wall.hpp"

namespace harness {

// Monte Carlo estimation of the origin-height growth curve and the exponent
// of its (log n)^gamma_inv law, plus the mean-recursion and started-high
// coupling experiments.

struct GrowthConfig {
    Kernel kernel;
    NoiseSpec noise;
    WallSpec wall;            // NegInfinity => free process
    int side = 27;
    int replicates = 100;
    std::uint64_t seed = 1;
    bool quenched = false;    // one wall realization shared by all replicates
    InitKind init = InitKind::ZeroJoinWall;
    double level = 0.0;
    int threads = 1;
};

struct GrowthCurve {
    std::vector<int> times;            // strictly increasing
    std::vector<double> mean;          // estimated E X_n(0)
    std::vector<double> se;
    int replicates = 0;
    std::uint64_t fingerprint = 0;     // hash of the generating config
    // Per-time replicate samples (ordered by replicate index); kept for
    // bootstrap resampling and variance checks.
    std::vector<std::vector<double>> samples;
};

// Geometric grid 1, 2, 4, ..., max_n (max_n rounded down to a power of two).
std::vector<int> geometric_times(int max_n);

// Mean and SE of X_n(0) at each grid time. Annealed by default: every
// replicate draws a fresh wall and a fresh noise stream from keys derived off
// the master seed with distinct tags. Aggregation order is fixed by replicate
// index, so the result does not depend on the thread count.
GrowthCurve estimate_growth(const GrowthConfig& cfg, const std::vector<int>& times);

struct ExponentFit {
    double gamma_inv = 0.0; // slope of log(mean) vs log(log n)
    double c = 0.0;         // prefactor exp(intercept)
    double r2 = 0.0;
    int window_lo = 0;      // first/last n used
    int window_hi = 0;
    double ci_lo = 0.0;     // bootstrap percentile CI for gamma_inv
    double ci_hi = 0.0;
    int resamples = 0;
};

// Weighted least squares of log(mean) on log(log n), window n >= 16, weights
// (mean/se)^2 (unit weights when SEs are absent). Needs at least 5 usable
// points and net growth across the window; otherwise InsufficientGrowth.
// CI from 200 bootstrap resamples: over replicates when samples are present,
// parametric from (mean, se) otherwise.
ExponentFit fit_exponent(const GrowthCurve& curve, std::uint64_t bootstrap_seed = 0,
                         int resamples = 200);

struct MuRecursionReport {
    std::vector<double> mu;        // mu_n estimates, n = 0..steps
    std::vector<double> se_diff;   // SE of mu_n - mu_{n-1}, paired, n = 1..steps
    double q = 0.0;                // P(W >= 0)
    std::vector<double> c0_values;
    std::vector<bool> c0_holds;    // inequality chain held at every n
    double smallest_passing_c0 = 0.0; // NaN-free: negative if none passed
    double largest_passing_c0 = 0.0;
    bool any_passed = false;
};

// Tests mu_n >= mu_{n-1} + G(mu_{n-1} + C0) * q - 3 SE for each C0 in the
// sweep, on the hat-transformed wall, with mu_n estimated at every step.
MuRecursionReport mu_recursion_check(const Kernel& kernel, const NoiseSpec& noise,
                                     const WallSpec& wall, int side, int steps,
                                     int replicates, std::uint64_t seed,
                                     const std::vector<double>& c0_sweep);

struct UpperBoundReport {
    double a_n = 0.0;
    double r_n = 0.0;
    double threshold_rn = 0.0;     // K (log n)^{1/theta}
    double p_exceed = 0.0;         // P(X^W_n(0) >= a_n)
    double p_decouple = 0.0;       // P(X^{W,r_n}_n(0) != Y^{r_n}_n(0))
    double p_running_max = 0.0;    // P(R_n > threshold)
    int domination_violations = 0; // pathwise X^W <= X^{W,r_n} failures
    int replicates = 0;
    bool running_max_truncated = false; // ball clipped to the torus
};

// Started-high coupling: height scale a_n = 2K((log n)^{max(1/alpha, 2/(2+d))}
// + (log n)^{1/theta}), start level r_n = a_n/2 (or r_override >= 0). Runs
// (X^W, X^{W,r_n}, Y^{r_n}) on shared noise per replicate. Requires alpha > 1.
UpperBoundReport upper_bound_experiment(const Kernel& kernel, const NoiseSpec& noise,
                                        const WallSpec& wall, int side, int n, double K,
                                        int replicates, std::uint64_t seed,
                                        double r_override = -1.0);

} // namespace harness
