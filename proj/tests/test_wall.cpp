#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "harness/errors.hpp"
#include "harness/wall.hpp"

using namespace harness;

TEST_CASE("hat and tilde transforms order correctly") {
    WallSpec spec{WallFamily::Gaussian, 1.0, 1.0, 0.0, 0.1};
    Field w = sample_wall(spec, 5, 2, 11);
    Field hat = hat_transform(w);
    Field tilde = tilde_transform(w);
    bool saw_neginf = false, saw_finite = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= 0.0) {
            CHECK(hat[i] == 0.0);
            CHECK(tilde[i] == w[i]);
            CHECK(hat[i] <= tilde[i]);
            saw_finite = true;
        } else {
            CHECK(hat[i] == kNegInf);
            CHECK(tilde[i] == kNegInf);
            saw_neginf = true;
        }
    }
    CHECK(saw_neginf);
    CHECK(saw_finite);
}

TEST_CASE("decompose_at recombines to the original by pointwise max") {
    WallSpec spec{WallFamily::Laplace, 1.0, 2.0, 0.0, 0.2};
    Field w = tilde_transform(sample_wall(spec, 9, 2, 9));
    const std::size_t site = 17;
    auto [without, only] = decompose_at(w, site);
    CHECK(without[site] == kNegInf);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(std::max(without[i], only[i]) == w[i]);
        if (i != site) CHECK(only[i] == kNegInf);
    }
}

TEST_CASE("neg-inf atom frequency matches q_neginf") {
    WallSpec spec{WallFamily::Gaussian, 1.0, 1.0, 0.0, 0.3};
    int neginf = 0;
    const int n = 100000;
    Field w = sample_wall(spec, 13, 1, n);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] == kNegInf) ++neginf;
    const double frac = static_cast<double>(neginf) / n;
    const double se = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::fabs(frac - 0.3) < 4.0 * se);
}

TEST_CASE("q_nonneg per family") {
    CHECK(WallSpec{WallFamily::NegInfinity, 1.0, 1.0, 0.0, 0.0}.q_nonneg() == 0.0);
    CHECK(WallSpec{WallFamily::DegenerateFlat, 1.0, 1.0, 2.0, 0.0}.q_nonneg() == 1.0);
    CHECK(WallSpec{WallFamily::DegenerateFlat, 1.0, 1.0, -2.0, 0.0}.q_nonneg() == 0.0);
    CHECK(WallSpec{WallFamily::Gaussian, 1.0, 1.0, 0.0, 0.0}.q_nonneg() == doctest::Approx(0.5));
    CHECK(WallSpec{WallFamily::Gaussian, 1.0, 1.0, 0.0, 0.4}.q_nonneg() == doctest::Approx(0.3));
}

TEST_CASE("flat and free walls") {
    Field flat = sample_wall(WallSpec{WallFamily::DegenerateFlat, 1.0, 1.0, 1.25, 0.0}, 1, 2, 5);
    for (std::size_t i = 0; i < flat.size(); ++i) CHECK(flat[i] == 1.25);
    Field free = sample_wall(WallSpec{WallFamily::NegInfinity, 1.0, 1.0, 0.0, 0.0}, 1, 2, 5);
    for (std::size_t i = 0; i < free.size(); ++i) CHECK(free[i] == kNegInf);
}

TEST_CASE("wall quantile is monotone and hits the atom") {
    WallSpec spec{WallFamily::StretchedExponential, 0.5, 1.0, 0.0, 0.25};
    CHECK(wall_quantile(spec, 0.1) == kNegInf);
    double prev = kNegInf;
    for (double u = 0.26; u < 1.0; u += 0.05) {
        const double x = wall_quantile(spec, u);
        CHECK(x >= prev);
        prev = x;
    }
}

TEST_CASE("running max over the graph-distance ball") {
    Field w(2, 9, 0.0);
    Coord far{};
    far[0] = 3;
    far[1] = 1; // l1 norm 4
    w.at(far) = 7.0;
    CHECK(running_max(w, 3, 1) == 0.0);  // ball radius 3 misses it
    CHECK(running_max(w, 4, 1) == 7.0);  // radius 4 reaches it
    CHECK_THROWS_AS(running_max(w, 5, 1), Error); // 2*5+1 > side
}

TEST_CASE("wall sampling is deterministic in the key") {
    WallSpec spec{WallFamily::Gaussian, 1.0, 1.0, 0.0, 0.1};
    Field a = sample_wall(spec, 77, 2, 7);
    Field b = sample_wall(spec, 77, 2, 7);
    Field c = sample_wall(spec, 78, 2, 7);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        if (a[i] != c[i]) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("spec validation") {
    WallSpec bad{WallFamily::Gaussian, 1.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(bad.check(), Error);
    WallSpec bad2{WallFamily::StretchedExponential, 0.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad2.check(), Error);
    WallSpec bad3{WallFamily::Laplace, 1.0, -1.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad3.check(), Error);
}
