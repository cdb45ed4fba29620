#pragma once

#include <cstdint>
#include <string>

#include "harness/field.hpp"
#include "harness/rng.hpp"

namespace harness {

enum class TailFamily { Gaussian, StretchedExponential, Laplace };

std::string family_name(TailFamily f);
TailFamily family_from_name(const std::string& name);

// Symmetric, integrable, unbounded-support noise law. Laplace(sigma) is
// StretchedExponential(1, sigma).
struct NoiseSpec {
    TailFamily family = TailFamily::Gaussian;
    double alpha = 2.0; // tail exponent; only read for StretchedExponential
    double sigma = 1.0;

    // Effective (family-resolved) tail exponent: 2 for Gaussian, 1 for
    // Laplace, alpha otherwise.
    double tail_exponent() const;

    void check() const;
};

// Exact upper tail P(X > x) for x >= 0.
double upper_tail(const NoiseSpec& spec, double x);

// G(x) = E (X - x)^+. Closed form for Gaussian; adaptive quadrature on the
// tail integral otherwise (absolute error <= 1e-9). For x < 0 the symmetry
// identity G(x) = -x + G(-x) is used.
double expected_excess(const NoiseSpec& spec, double x);

// Quantile of the law (inverse CDF), u in (0,1).
double noise_quantile(const NoiseSpec& spec, double u);

// Deterministic noise field: value(n, i) is a pure function of
// (key, n, flattened site), so coupled processes replay identical noise.
struct NoiseStream {
    std::uint64_t key = 0;
    NoiseSpec spec;

    double sample(std::int64_t n, std::uint64_t site) const {
        return noise_quantile(spec, rng::to_unit(rng::site_hash(rng::step_base(key, n), site)));
    }

    // Fills buf with eps_n(i) for every site of the torus.
    void fill(std::int64_t n, Field& buf) const;
};

} // namespace harness
