#include <doctest.h>

#include <cmath>

#include "harness/errors.hpp"
#include "harness/kernel.hpp"

using namespace harness;

TEST_CASE("srw kernel basics") {
    for (int d = 1; d <= 3; ++d) {
        Kernel k = Kernel::srw(d);
        CHECK(k.dim() == d);
        CHECK(k.range() == 1);
        CHECK(k.is_srw());
        CHECK(k.offsets().size() == static_cast<std::size_t>(2 * d));
        double sum = 0.0;
        for (double w : k.weights()) {
            CHECK(w == doctest::Approx(1.0 / (2 * d)));
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("two-step return probabilities") {
    // d=1: after two steps the walk is at -2, 0, 2 with probs 1/4, 1/2, 1/4.
    Kernel k1 = Kernel::srw(1);
    auto p2 = k1.m_step_probs(2, 2);
    CHECK(p2.at({-2}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p2.at({0}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p2.at({2}) == doctest::Approx(0.25).epsilon(1e-14));

    // d=3: return in two steps = 6 * (1/6)^2 = 1/6.
    Kernel k3 = Kernel::srw(3);
    auto q2 = k3.m_step_probs(2, 2);
    CHECK(q2.at({0, 0, 0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    // m = 0 is the delta at the origin.
    auto p0 = k1.m_step_probs(0, 1);
    CHECK(p0.size() == 1);
    CHECK(p0.at({0}) == doctest::Approx(1.0));
}

TEST_CASE("validation rejects bad kernels") {
    KernelSpec s;
    s.dim = 1;
    s.range = 1;
    s.add({1}, 0.6);
    s.add({-1}, 0.6);
    CHECK_THROWS_WITH_AS(Kernel::validate(s), doctest::Contains("NonStochastic"), Error);

    KernelSpec a;
    a.dim = 1;
    a.range = 1;
    a.add({1}, 0.7);
    a.add({-1}, 0.3);
    CHECK_THROWS_WITH_AS(Kernel::validate(a), doctest::Contains("Asymmetric"), Error);

    KernelSpec r;
    r.dim = 1;
    r.range = 1;
    r.add({2}, 0.5);
    r.add({-2}, 0.5);
    CHECK_THROWS_WITH_AS(Kernel::validate(r), doctest::Contains("RangeViolation"), Error);

    // Support {-2, 0, 2} only reaches the even sublattice.
    KernelSpec e;
    e.dim = 1;
    e.range = 2;
    e.add({2}, 0.25);
    e.add({0}, 0.5);
    e.add({-2}, 0.25);
    CHECK_THROWS_WITH_AS(Kernel::validate(e), doctest::Contains("NotFullDimensional"), Error);
}

TEST_CASE("custom kernel with longer range validates") {
    KernelSpec s;
    s.dim = 2;
    s.range = 2;
    s.add({1, 0}, 0.2);
    s.add({-1, 0}, 0.2);
    s.add({0, 1}, 0.2);
    s.add({0, -1}, 0.2);
    s.add({2, 0}, 0.1);
    s.add({-2, 0}, 0.1);
    Kernel k = Kernel::validate(s);
    CHECK(k.range() == 2);
    CHECK_FALSE(k.is_srw());
}

TEST_CASE("apply conserves mass and commutes with translation") {
    Kernel k = Kernel::srw(2);
    Field f(2, 9);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::sin(0.37 * static_cast<double>(i)) + 0.2 * static_cast<double>(i % 5);
    Field g = k.apply(f);
    double sf = 0.0, sg = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sf += f[i];
        sg += g[i];
    }
    CHECK(sg == doctest::Approx(sf).epsilon(1e-12));

    // Shift-then-convolve equals convolve-then-shift on the torus.
    Field fs(2, 9);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Coord c = f.coords(i);
        c[0] += 1;
        fs[f.index(c)] = f[i];
    }
    Field gs = k.apply(fs);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Coord c = f.coords(i);
        c[0] += 1;
        CHECK(gs[f.index(c)] == doctest::Approx(g[i]).epsilon(1e-13));
    }
}

TEST_CASE("apply preserves pointwise order") {
    Kernel k = Kernel::srw(3);
    Field lo(3, 7), hi(3, 7);
    for (std::size_t i = 0; i < lo.size(); ++i) {
        lo[i] = std::cos(0.11 * static_cast<double>(i));
        hi[i] = lo[i] + 0.01 * static_cast<double>(i % 3);
    }
    Field alo = k.apply(lo), ahi = k.apply(hi);
    for (std::size_t i = 0; i < lo.size(); ++i) CHECK(alo[i] <= ahi[i] + 1e-15);
}

TEST_CASE("lattice index of generating sets") {
    Coord e1{}, e2{}, d2{};
    e1[0] = 1;
    e2[1] = 1;
    d2[0] = 2;
    CHECK(lattice_index({e1, e2}, 2) == 1);
    CHECK(lattice_index({d2, e2}, 2) == 2);
    CHECK(lattice_index({e1}, 2) == 0); // rank deficient
}
