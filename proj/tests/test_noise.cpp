#include <doctest.h>

#include <cmath>

#include "harness/errors.hpp"
#include "harness/noise.hpp"

using namespace harness;

namespace {

// Gaussian G(x) = sigma phi(x/sigma) - x Phibar(x/sigma), for cross-checking
// the library value through an independent formula.
double gaussian_excess(double x, double sigma) {
    const double z = x / sigma;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    const double tail = 0.5 * std::erfc(z / std::sqrt(2.0));
    return sigma * phi - x * tail;
}

} // namespace

TEST_CASE("gaussian tail and excess closed forms") {
    NoiseSpec g;
    CHECK(upper_tail(g, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(upper_tail(g, 1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
    CHECK(expected_excess(g, 0.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
    for (double x = -5.0; x <= 5.0; x += 0.5)
        CHECK(expected_excess(g, x) == doctest::Approx(gaussian_excess(x, 1.0)).epsilon(1e-8));
}

TEST_CASE("laplace tail and excess") {
    NoiseSpec l;
    l.family = TailFamily::Laplace;
    CHECK(l.tail_exponent() == doctest::Approx(1.0));
    // P(X > x) = e^{-x}/2 and G(x) = e^{-x}/2 for x >= 0 at sigma = 1.
    CHECK(upper_tail(l, 2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(expected_excess(l, 2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-7));
    // Symmetry identity for negative arguments.
    CHECK(expected_excess(l, -1.5) ==
          doctest::Approx(1.5 + expected_excess(l, 1.5)).epsilon(1e-7));
}

TEST_CASE("stretched exponential tail exponent shows in log tail") {
    NoiseSpec s;
    s.family = TailFamily::StretchedExponential;
    s.alpha = 1.5;
    s.sigma = 2.0;
    for (double x : {2.0, 4.0, 8.0}) {
        const double lt = std::log(2.0 * upper_tail(s, x));
        CHECK(-lt == doctest::Approx(std::pow(x / s.sigma, s.alpha)).epsilon(1e-10));
    }
}

TEST_CASE("quantile inverts the tail") {
    for (NoiseSpec spec : {NoiseSpec{TailFamily::Gaussian, 2.0, 1.0},
                           NoiseSpec{TailFamily::StretchedExponential, 1.3, 0.7},
                           NoiseSpec{TailFamily::Laplace, 1.0, 2.0}}) {
        CHECK(noise_quantile(spec, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
        for (double u : {0.01, 0.2, 0.77, 0.999}) {
            const double x = noise_quantile(spec, u);
            CHECK(upper_tail(spec, x) == doctest::Approx(1.0 - u).epsilon(1e-7));
        }
        // Symmetry of the law.
        CHECK(noise_quantile(spec, 0.12) == doctest::Approx(-noise_quantile(spec, 0.88)));
    }
}

TEST_CASE("quantile sampling hits the right moments") {
    NoiseSpec g;
    const NoiseStream stream{42, g};
    double sum = 0.0, sum2 = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double x = stream.sample(0, static_cast<std::uint64_t>(i));
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("noise stream is a pure function of its counters") {
    NoiseSpec g;
    const NoiseStream a{7, g}, b{7, g}, c{8, g};
    CHECK(a.sample(3, 11) == b.sample(3, 11));
    CHECK(a.sample(3, 11) != c.sample(3, 11));
    CHECK(a.sample(3, 11) != a.sample(4, 11));
    CHECK(a.sample(3, 11) != a.sample(3, 12));
    Field buf(2, 5);
    a.fill(3, buf);
    CHECK(buf[11] == a.sample(3, 11));
}

TEST_CASE("refined quantile agrees with the fast one") {
    for (double u : {1e-8, 0.001, 0.3, 0.5, 0.9, 0.99999}) {
        const double fast = rng::normal_quantile(u);
        const double ref = rng::normal_quantile_refined(u);
        CHECK(std::fabs(fast - ref) <= 1.3e-9 * std::max(1.0, std::fabs(ref)));
    }
}

TEST_CASE("spec validation") {
    NoiseSpec bad;
    bad.sigma = -1.0;
    CHECK_THROWS_AS(bad.check(), Error);
    NoiseSpec bad2;
    bad2.family = TailFamily::StretchedExponential;
    bad2.alpha = 0.0;
    CHECK_THROWS_AS(bad2.check(), Error);
}
