#include "harness/rng.hpp"

namespace harness::rng {

namespace {

// Acklam coefficients.
constexpr double a0 = -3.969683028665376e+01;
constexpr double a1 = 2.209460984245205e+02;
constexpr double a2 = -2.759285104469687e+02;
constexpr double a3 = 1.383577518672690e+02;
constexpr double a4 = -3.066479806614716e+01;
constexpr double a5 = 2.506628277459239e+00;

constexpr double b0 = -5.447609879822406e+01;
constexpr double b1 = 1.615858368580409e+02;
constexpr double b2 = -1.556989798598866e+02;
constexpr double b3 = 6.680131188771972e+01;
constexpr double b4 = -1.328068155288572e+01;

constexpr double c0 = -7.784894002430293e-03;
constexpr double c1 = -3.223964580411365e-01;
constexpr double c2 = -2.400758277161838e+00;
constexpr double c3 = -2.549732539343734e+00;
constexpr double c4 = 4.374664141464968e+00;
constexpr double c5 = 2.938163982698783e+00;

constexpr double d0 = 7.784695709041462e-03;
constexpr double d1 = 3.224671290700398e-01;
constexpr double d2 = 2.445134137142996e+00;
constexpr double d3 = 3.754408661907416e+00;

constexpr double u_low = 0.02425;

double tail_branch(double u) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c0 * q + c1) * q + c2) * q + c3) * q + c4) * q + c5) /
           ((((d0 * q + d1) * q + d2) * q + d3) * q + 1.0);
}

} // namespace

double normal_quantile(double u) {
    if (u < u_low) return tail_branch(u);
    if (u > 1.0 - u_low) return -tail_branch(1.0 - u);
    const double q = u - 0.5;
    const double r = q * q;
    return (((((a0 * r + a1) * r + a2) * r + a3) * r + a4) * r + a5) * q /
           (((((b0 * r + b1) * r + b2) * r + b3) * r + b4) * r + 1.0);
}

double normal_quantile_refined(double u) {
    double x = normal_quantile(u);
    // Halley refinement on Phi(x) - u = 0, with Phi via erfc.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double t = e / phi;
    x -= t / (1.0 + 0.5 * x * t);
    return x;
}

} // namespace harness::rng
