#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "harness/dynamics.hpp"
#include "harness/wall.hpp"

namespace harness {

// Randomized pathwise checks of the coupling inequalities. Each suite runs
// `trials` independent instances and reports the worst observed violation
// (<= tolerance means the property held).

struct PropertyOptions {
    int dim = 3;
    int side = 101;
    int steps = 50;
    int trials = 100;
    std::uint64_t seed = 1;
    NoiseSpec noise{};
    WallSpec wall{WallFamily::Gaussian, 1.0, 1.0, 0.0, 0.0};
    double tolerance = 1e-12;

    // Test fixture: run the comparison process without its wall. A correct
    // engine then fails wall monotonicity, which is what mutant detection
    // asserts.
    bool mutant_drop_wall = false;
};

struct PropertyResult {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst = 0.0; // max violation magnitude seen
    std::string first_violation; // "seed=... step=... site=..." or empty
    bool passed() const { return violations == 0; }
};

// step_w2 vs step_w3 on randomized (state, wall, noise) triples.
PropertyResult check_w2_w3_identity(const std::vector<int>& dims, int trials,
                                    std::uint64_t seed, double tolerance = 1e-12);

// W <= W' pointwise implies X^W_n <= X^{W'}_n pathwise, plus monotonicity in
// the initial condition.
PropertyResult check_wall_monotonicity(const PropertyOptions& opt);

// Chain X^{hatW^0} >= X^{hatW} >= Y plus the per-step inequality (difference
// bound at the origin) and its iterated form.
PropertyResult check_hat_chain(const PropertyOptions& opt);

// Sandwich for the nu recursion under single-site decomposition.
PropertyResult check_nu_sandwich(const PropertyOptions& opt);

// Wall domination: X_n >= W and X_n >= P.X_{n-1} + eps_n pathwise.
PropertyResult check_wall_domination(const PropertyOptions& opt);

std::vector<PropertyResult> run_all_properties(const PropertyOptions& opt);

} // namespace harness
