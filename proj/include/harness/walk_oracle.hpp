#pragma once

#include <vector>

#include "harness/field.hpp"
#include "harness/kernel.hpp"

namespace harness {

// Streaming first-return dynamic program for the walk killed at the origin,
// on the exact non-periodic box of radius v*N (finite range => no truncation).
//
// State after step k: f_k(j) = P_j(first hit of 0 at step k), stored on the
// box, plus the origin-return sequence p_m^{0}(0,0), m <= k, and the
// cumulative sums S_k(j) = sum_{m<=k} f_m(j).
class FirstReturnDP {
public:
    FirstReturnDP(const Kernel& kernel, int horizon);

    void step();              // advance from k to k+1 (k() starts at 1)
    void run_to(int k);

    int k() const { return k_; }
    int horizon() const { return horizon_; }
    int radius() const { return radius_; }

    // p_m^{0}(0,0) for m = 1..k, index m-1.
    const std::vector<double>& origin_returns() const { return origin_returns_; }

    // S_k at a lattice offset (components in [-radius, radius]).
    double cumulative_at(const Coord& offset) const;
    const Field& cumulative() const { return cum_; }
    const Field& current() const { return f_; }

    // Mass-conservation defect |sum_j f_k(j) + sum_{m<=k} p_m - 1|.
    double conservation_defect() const;

    std::size_t box_index(const Coord& offset) const;

private:
    Kernel kernel_;
    int horizon_;
    int radius_;
    int k_ = 1;
    Field f_;    // f_k, with f_k(0) already folded into origin_returns_
    Field cum_;  // includes origin returns at the center
    std::vector<double> origin_returns_;
    double returned_mass_ = 0.0;
};

struct FirstReturnTable {
    int horizon = 0;
    int radius = 0;
    std::vector<double> origin_returns; // p_k^{0}(0,0), k = 1..N
    Field cumulative;                   // S_N(j) on the box
};

FirstReturnTable first_return_probs(const Kernel& kernel, int horizon);

// Unrestricted return probabilities p_k(0), k = 0..N. Exact combinatorial
// route for the nearest-neighbor walk (any d, large N); box DP otherwise.
std::vector<double> unrestricted_returns(const Kernel& kernel, int horizon);

struct ReturnSum {
    double a_n = 0.0;         // sum_{k<=N} p_k^{0}(0,0)
    double tail = 0.0;        // heuristic bound on sum_{k>N}, from p_k(0) decay
    double decay_exponent = 0.0;
    std::vector<double> first_returns; // f_k = p_k^{0}(0,0), k = 1..N
};

// Bracket [a_N, a_N + tail] for the total return probability a.
ReturnSum return_sum(const Kernel& kernel, int horizon);

// Closed form for the single-spike nu recursion: W * sum_{k<=n} f_k(i) for
// i != 0, W at the origin. Requires W > 0.
double nu_closed_form(const Kernel& kernel, double spike, const Coord& site, int n);

// P.nu_n(0) = W * sum_{k=1}^{n+1} p_k^{0}(0,0).
double p_nu_origin(const Kernel& kernel, double spike, int n);

} // namespace harness
