#include <doctest.h>

#include <cmath>
#include <memory>

#include "harness/dynamics.hpp"
#include "harness/errors.hpp"
#include "harness/wall.hpp"

using namespace harness;

namespace {

std::shared_ptr<Field> gaussian_wall(std::uint64_t key, int dim, int side, double q_neginf) {
    WallSpec spec{WallFamily::Gaussian, 1.0, 1.0, 0.0, q_neginf};
    return std::make_shared<Field>(sample_wall(spec, key, dim, side));
}

} // namespace

TEST_CASE("one step literal vs rewritten form") {
    const Kernel k = Kernel::srw(2);
    Field state(2, 7), noise(2, 7);
    auto wall = gaussian_wall(3, 2, 7, 0.2);
    NoiseStream s{11, NoiseSpec{}};
    s.fill(0, state);
    s.fill(1, noise);
    Field a(2, 7), b(2, 7);
    step_w2(state, wall.get(), k, noise, a);
    step_w3(state, wall.get(), k, noise, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
}

TEST_CASE("init kinds") {
    ProcessConfig cfg;
    cfg.kernel = Kernel::srw(2);
    cfg.side = 7;
    cfg.wall = gaussian_wall(5, 2, 7, 0.3);
    cfg.init = InitKind::ZeroJoinWall;
    Field f0 = init_field(cfg);
    for (std::size_t i = 0; i < f0.size(); ++i)
        CHECK(f0[i] == std::max(0.0, (*cfg.wall)[i]));
    cfg.init = InitKind::Level;
    cfg.level = 2.5;
    Field f1 = init_field(cfg);
    for (std::size_t i = 0; i < f1.size(); ++i)
        CHECK(f1[i] == std::max(2.5, (*cfg.wall)[i]));
    cfg.init = InitKind::FreeLevel;
    Field f2 = init_field(cfg);
    for (std::size_t i = 0; i < f2.size(); ++i) CHECK(f2[i] == 2.5);
}

TEST_CASE("null wall and all neg-inf wall run identically") {
    ProcessConfig a;
    a.kernel = Kernel::srw(3);
    a.side = 11;
    a.steps = 20;
    a.init = InitKind::FreeLevel;
    a.noise = NoiseStream{21, NoiseSpec{}};
    ProcessConfig b = a;
    b.wall = std::make_shared<Field>(3, 11, kNegInf);
    Trajectory ta = run(a);
    Trajectory tb = run(b);
    REQUIRE(ta.origin.size() == tb.origin.size());
    for (std::size_t n = 0; n < ta.origin.size(); ++n) CHECK(ta.origin[n] == tb.origin[n]);
}

TEST_CASE("fused path tracks the generic path") {
    // run() takes the vectorized lane for d=3 Gaussian; a callback forces the
    // buffered scalar route. Same seeds, so any drift is float reassociation.
    for (int side : {9, 13, 27}) {
        ProcessConfig cfg;
        cfg.kernel = Kernel::srw(3);
        cfg.side = side;
        cfg.steps = 40;
        cfg.wall = gaussian_wall(31, 3, side, 0.5);
        cfg.noise = NoiseStream{37, NoiseSpec{}};
        Trajectory fused = run(cfg);
        std::vector<double> generic;
        run_coupled({cfg}, [&](int, const std::vector<Field>& s, const Field&) {
            generic.push_back(s[0][0]);
        });
        REQUIRE(generic.size() + 1 == fused.origin.size());
        for (std::size_t n = 0; n < generic.size(); ++n)
            CHECK(fused.origin[n + 1] == doctest::Approx(generic[n]).epsilon(1e-9));
    }
}

TEST_CASE("trajectory dominates wall and drive") {
    const Kernel k = Kernel::srw(2);
    ProcessConfig cfg;
    cfg.kernel = k;
    cfg.side = 9;
    cfg.steps = 25;
    cfg.wall = gaussian_wall(41, 2, 9, 0.4);
    cfg.noise = NoiseStream{43, NoiseSpec{}};
    Field prev = init_field(cfg), conv(2, 9);
    run_coupled({cfg}, [&](int, const std::vector<Field>& s, const Field& eps) {
        k.apply(prev, conv);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double w = (*cfg.wall)[i];
            if (w != kNegInf) CHECK(s[0][i] >= w - 1e-12);
            CHECK(s[0][i] >= conv[i] + eps[i] - 1e-12);
        }
        prev = s[0];
    });
}

TEST_CASE("nu recursion is deterministic, monotone and wall-dominating") {
    const Kernel k = Kernel::srw(3);
    Field wall(3, 9, kNegInf);
    wall[0] = 1.5;
    Coord c{};
    c[1] = 2;
    wall.at(c) = 0.75;
    Field prev = nu_init(wall), next(3, 9);
    for (int n = 1; n <= 15; ++n) {
        nu_step(prev, wall, k, next);
        for (std::size_t i = 0; i < next.size(); ++i) {
            CHECK(next[i] >= prev[i] - 1e-13); // monotone in n
            if (wall[i] != kNegInf) CHECK(next[i] >= wall[i] - 1e-13);
            CHECK(next[i] >= 0.0);
        }
        std::swap(prev, next);
    }
    Field direct = run_nu(k, wall, 15);
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(direct[i] == doctest::Approx(prev[i]).epsilon(1e-14));
}

TEST_CASE("record_fields keeps per-step snapshots") {
    ProcessConfig cfg;
    cfg.kernel = Kernel::srw(1);
    cfg.side = 9;
    cfg.steps = 4;
    cfg.record_fields = true;
    cfg.noise = NoiseStream{3, NoiseSpec{}};
    Trajectory t = run(cfg);
    REQUIRE(t.fields.size() == 5);
    for (int n = 0; n <= 4; ++n) CHECK(t.fields[static_cast<std::size_t>(n)][0] == t.origin[static_cast<std::size_t>(n)]);
}

TEST_CASE("run_coupled rejects mismatched configs") {
    ProcessConfig a;
    a.kernel = Kernel::srw(2);
    a.side = 9;
    a.steps = 3;
    a.noise = NoiseStream{1, NoiseSpec{}};
    ProcessConfig b = a;
    b.side = 11;
    CHECK_THROWS_AS(run_coupled({a, b}), Error);
    ProcessConfig c = a;
    c.noise.key = 2;
    CHECK_THROWS_AS(run_coupled({a, c}), Error);
}
