#pragma once

#include <map>
#include <utility>
#include <vector>

#include "harness/field.hpp"

namespace harness {

// Offset/weight table describing a finite-range symmetric stochastic kernel
// on Z^d. Unvalidated input; Kernel::validate turns it into a usable kernel.
struct KernelSpec {
    int dim = 0;
    int range = 0;
    std::vector<std::pair<Coord, double>> weights;

    void add(std::initializer_list<int> offset, double w) {
        Coord c{};
        int a = 0;
        for (int x : offset) c[a++] = x;
        weights.emplace_back(c, w);
    }
};

class Kernel {
public:
    // Empty kernel; every real instance comes from validate() or srw().
    Kernel() = default;

    // Checks stochasticity, symmetry p(j)=p(-j), the range bound |j| <= v in
    // graph distance, and that the support generates Z^d; throws Error with
    // the violated assumption otherwise.
    static Kernel validate(const KernelSpec& spec);

    // Nearest-neighbor simple random walk, p(+-e_k) = 1/(2d).
    static Kernel srw(int dim);

    int dim() const { return dim_; }
    int range() const { return range_; }
    bool is_srw() const { return is_srw_; }

    const std::vector<Coord>& offsets() const { return offsets_; }
    const std::vector<double>& weights() const { return weights_; }

    // out(i) = sum_j p(j) field(i+j), periodic wrap. Requires a finite field
    // and L >= 2v+1.
    Field apply(const Field& field) const;
    void apply(const Field& field, Field& out) const;

    // m-step transition probabilities p_m(j) by repeated convolution of a
    // delta on a box of the given radius; exact when radius >= v*m.
    std::map<std::vector<int>, double> m_step_probs(int m, int radius) const;

    const KernelSpec& spec() const { return spec_; }

private:
    KernelSpec spec_;
    int dim_ = 0;
    int range_ = 0;
    bool is_srw_ = false;
    std::vector<Coord> offsets_;
    std::vector<double> weights_;
};

// Index of the integer lattice spanned by the given vectors inside Z^dim:
// 1 means they generate all of Z^dim, 0 means the span has rank < dim,
// k > 1 means a proper sublattice of that index.
std::int64_t lattice_index(std::vector<Coord> gens, int dim);

} // namespace harness
