#include "harness/noise.hpp"

#include <cmath>

namespace harness {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double se_alpha(const NoiseSpec& spec) {
    return spec.family == TailFamily::Laplace ? 1.0 : spec.alpha;
}

// Adaptive Simpson on [lo, hi].
double simpson(double (*f)(double, const NoiseSpec&), const NoiseSpec& s,
               double lo, double hi, double flo, double fmid, double fhi,
               double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm, s), frm = f(rm, s);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, s, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
           simpson(f, s, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

double integrate(double (*f)(double, const NoiseSpec&), const NoiseSpec& s,
                 double lo, double hi, double tol) {
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo, s), fmid = f(mid, s), fhi = f(hi, s);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson(f, s, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

double tail_integrand(double t, const NoiseSpec& s) { return upper_tail(s, t); }

} // namespace

std::string family_name(TailFamily f) {
    switch (f) {
    case TailFamily::Gaussian: return "gaussian";
    case TailFamily::StretchedExponential: return "se";
    case TailFamily::Laplace: return "laplace";
    }
    return "?";
}

TailFamily family_from_name(const std::string& name) {
    if (name == "gaussian") return TailFamily::Gaussian;
    if (name == "se" || name == "stretched_exponential") return TailFamily::StretchedExponential;
    if (name == "laplace") return TailFamily::Laplace;
    throw Error(Errc::ConfigError, "unknown noise family '" + name + "'");
}

double NoiseSpec::tail_exponent() const {
    switch (family) {
    case TailFamily::Gaussian: return 2.0;
    case TailFamily::Laplace: return 1.0;
    case TailFamily::StretchedExponential: return alpha;
    }
    return alpha;
}

void NoiseSpec::check() const {
    if (sigma <= 0.0) throw Error(Errc::ConfigError, "noise sigma must be positive");
    if (family == TailFamily::StretchedExponential && alpha <= 0.0)
        throw Error(Errc::ConfigError, "noise alpha must be positive");
}

double upper_tail(const NoiseSpec& spec, double x) {
    if (x < 0.0) return 1.0 - upper_tail(spec, -x);
    switch (spec.family) {
    case TailFamily::Gaussian:
        return 0.5 * std::erfc(x / (spec.sigma * kSqrt2));
    case TailFamily::StretchedExponential:
    case TailFamily::Laplace:
        return 0.5 * std::exp(-std::pow(x / spec.sigma, se_alpha(spec)));
    }
    return 0.0;
}

double expected_excess(const NoiseSpec& spec, double x) {
    if (x < 0.0) return -x + expected_excess(spec, -x);
    if (spec.family == TailFamily::Gaussian) {
        const double z = x / spec.sigma;
        const double phi = kInvSqrt2Pi * std::exp(-0.5 * z * z);
        const double tail = 0.5 * std::erfc(z / kSqrt2);
        return spec.sigma * phi - x * tail;
    }
    // G(x) = int_x^inf Fbar(t) dt; cut where the exponent reaches 60.
    const double a = se_alpha(spec);
    const double hi = spec.sigma * std::pow(60.0, 1.0 / a);
    if (x >= hi) {
        // crude but safe: integrand below e^-60, interval bounded via decay
        return integrate(tail_integrand, spec, x, x + spec.sigma * std::pow(80.0, 1.0 / a), 1e-12);
    }
    return integrate(tail_integrand, spec, x, hi, 1e-10);
}

double noise_quantile(const NoiseSpec& spec, double u) {
    switch (spec.family) {
    case TailFamily::Gaussian:
        return spec.sigma * rng::normal_quantile(u);
    case TailFamily::StretchedExponential:
    case TailFamily::Laplace:
        return rng::stretched_exp_quantile(u, se_alpha(spec), spec.sigma);
    }
    return 0.0;
}

void NoiseStream::fill(std::int64_t n, Field& buf) const {
    const std::uint64_t base = rng::step_base(key, n);
    double* out = buf.data();
    const std::size_t sz = buf.size();
    if (spec.family == TailFamily::Gaussian) {
        const double sigma = spec.sigma;
        for (std::size_t i = 0; i < sz; ++i)
            out[i] = sigma * rng::normal_quantile(rng::to_unit(rng::site_hash(base, i)));
    } else {
        const double a = se_alpha(spec);
        const double sigma = spec.sigma;
        for (std::size_t i = 0; i < sz; ++i)
            out[i] = rng::stretched_exp_quantile(rng::to_unit(rng::site_hash(base, i)), a, sigma);
    }
}

} // namespace harness
