#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "harness/field.hpp"
#include "harness/noise.hpp"

namespace harness {

enum class WallFamily { Gaussian, StretchedExponential, Laplace, DegenerateFlat, NegInfinity };

std::string wall_family_name(WallFamily f);
WallFamily wall_family_from_name(const std::string& name);

// Law of the i.i.d. wall heights. With q_neginf > 0 the law is a mixture:
// -inf with probability q_neginf, otherwise a draw from the finite family.
struct WallSpec {
    WallFamily family = WallFamily::DegenerateFlat;
    double theta = 1.0;  // tail exponent of the finite family
    double sigma = 1.0;
    double level = 0.0;  // DegenerateFlat height
    double q_neginf = 0.0;

    void check() const;

    // P(W(i) >= 0).
    double q_nonneg() const;
};

// Samples an i.i.d. wall field under a wall-dedicated key (derive it with
// rng::kTagWall so noise and wall streams never share counters).
Field sample_wall(const WallSpec& spec, std::uint64_t key, int dim, int side);

// Single wall-height draw, exposed for order-statistics style tests.
double wall_quantile(const WallSpec& spec, double u);

// hat W: 0 where W >= 0, -inf where W < 0.
Field hat_transform(const Field& wall);

// tilde W: W where W >= 0, -inf where W < 0.
Field tilde_transform(const Field& wall);

// Splits tilde W at a site: first = tilde W with -inf at i, second = -inf
// everywhere except tilde W(i) at i. Pointwise max reconstructs tilde W.
std::pair<Field, Field> decompose_at(const Field& wall, std::size_t site);

// R_n = max of W over the graph-distance ball |i| <= v*n around the origin.
// Requires the torus side to contain the ball (L >= 2vn+1).
double running_max(const Field& wall, int n, int v);

} // namespace harness
