#include <doctest.h>

#include <cmath>
#include <numeric>

#include "harness/errors.hpp"
#include "harness/walk_oracle.hpp"

using namespace harness;

TEST_CASE("d=1 first return at step two is one half") {
    FirstReturnDP dp(Kernel::srw(1), 6);
    dp.run_to(6);
    const auto& fr = dp.origin_returns();
    REQUIRE(fr.size() == 6);
    CHECK(fr[0] == 0.0);                                   // p_1 = 0
    CHECK(fr[1] == doctest::Approx(0.5).epsilon(1e-14));   // p_2 = 1/2
    CHECK(fr[2] == 0.0);                                   // odd step
    CHECK(fr[3] == doctest::Approx(0.125).epsilon(1e-14)); // p_4 = 1/8
    CHECK(fr[5] == doctest::Approx(1.0 / 16.0).epsilon(1e-14)); // p_6 = 1/16
}

TEST_CASE("first-return mass is conserved") {
    for (int d : {1, 2, 3}) {
        FirstReturnDP dp(Kernel::srw(d), 40);
        dp.run_to(40);
        CHECK(dp.conservation_defect() < 1e-10);
    }
}

TEST_CASE("cumulative first-return field is symmetric") {
    FirstReturnDP dp(Kernel::srw(2), 20);
    dp.run_to(20);
    for (int x = 0; x <= 5; ++x)
        for (int y = 0; y <= 5; ++y) {
            Coord a{}, b{};
            a[0] = x;
            a[1] = y;
            b[0] = -x;
            b[1] = -y;
            CHECK(dp.cumulative_at(a) == doctest::Approx(dp.cumulative_at(b)).epsilon(1e-12));
            b[0] = y;
            b[1] = x; // coordinate swap symmetry of the srw
            CHECK(dp.cumulative_at(a) == doctest::Approx(dp.cumulative_at(b)).epsilon(1e-12));
        }
}

TEST_CASE("return sum: recurrent d=1 approaches one, transient d decreases") {
    ReturnSum r1 = return_sum(Kernel::srw(1), 10000);
    CHECK(r1.a_n > 0.9);
    CHECK(r1.a_n < 1.0);

    ReturnSum r3 = return_sum(Kernel::srw(3), 2000);
    ReturnSum r5 = return_sum(Kernel::srw(5), 500);
    CHECK(r5.a_n + r5.tail < r3.a_n);
    CHECK(r3.a_n + r3.tail < 1.0);
}

TEST_CASE("d=3 return-sum bracket contains the long-horizon value") {
    // 0.340537330 is the same DP pushed to N = 1e5, computed once and frozen.
    const double frozen = 0.340537330;
    ReturnSum r = return_sum(Kernel::srw(3), 2000);
    CHECK(r.a_n <= frozen);
    CHECK(r.a_n + r.tail >= frozen);
    CHECK(r.tail < 0.01);
}

TEST_CASE("unrestricted returns: exact small values") {
    auto p1 = unrestricted_returns(Kernel::srw(1), 4);
    REQUIRE(p1.size() == 5);
    CHECK(p1[0] == doctest::Approx(1.0));
    CHECK(p1[1] == 0.0);
    CHECK(p1[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p1[4] == doctest::Approx(0.375).epsilon(1e-14)); // C(4,2)/16
    auto p3 = unrestricted_returns(Kernel::srw(3), 2);
    CHECK(p3[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("nu closed form is bounded by the spike and nondecreasing in n") {
    const Kernel k = Kernel::srw(3);
    const double spike = 2.0;
    Coord site{};
    site[0] = 1;
    double prev = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const double v = nu_closed_form(k, spike, site, n);
        CHECK(v >= prev - 1e-15);
        CHECK(v <= spike);
        prev = v;
    }
    Coord origin{};
    CHECK(nu_closed_form(k, spike, origin, 5) == doctest::Approx(spike));
    CHECK_THROWS_AS(nu_closed_form(k, -1.0, site, 5), Error);
}

TEST_CASE("p_nu_origin matches the first-return series") {
    const Kernel k = Kernel::srw(3);
    const double spike = 1.7;
    const int n = 10;
    FirstReturnDP dp(k, n + 1);
    dp.run_to(n + 1);
    double sum = 0.0;
    for (int m = 1; m <= n + 1; ++m) sum += dp.origin_returns()[static_cast<std::size_t>(m - 1)];
    CHECK(p_nu_origin(k, spike, n) == doctest::Approx(spike * sum).epsilon(1e-12));
}

TEST_CASE("first_return_probs table matches the streaming DP") {
    const Kernel k = Kernel::srw(2);
    FirstReturnTable t = first_return_probs(k, 15);
    FirstReturnDP dp(k, 15);
    dp.run_to(15);
    REQUIRE(t.origin_returns.size() == dp.origin_returns().size());
    for (std::size_t i = 0; i < t.origin_returns.size(); ++i)
        CHECK(t.origin_returns[i] == dp.origin_returns()[i]);
    CHECK(t.radius == dp.radius());
}
