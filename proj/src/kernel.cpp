#include "harness/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace harness {

std::int64_t lattice_index(std::vector<Coord> gens, int dim) {
    // Integer row echelon (Hermite-style) with exact arithmetic.
    std::vector<std::array<std::int64_t, kMaxDim>> m;
    m.reserve(gens.size());
    for (const auto& g : gens) {
        std::array<std::int64_t, kMaxDim> row{};
        bool nonzero = false;
        for (int a = 0; a < dim; ++a) {
            row[a] = g[a];
            nonzero = nonzero || g[a] != 0;
        }
        if (nonzero) m.push_back(row);
    }

    std::size_t r = 0;
    std::int64_t det = 1;
    for (int col = 0; col < dim && r < m.size(); ++col) {
        for (;;) {
            std::size_t pivot = m.size();
            for (std::size_t i = r; i < m.size(); ++i) {
                if (m[i][col] != 0 &&
                    (pivot == m.size() || std::llabs(m[i][col]) < std::llabs(m[pivot][col])))
                    pivot = i;
            }
            if (pivot == m.size()) break; // column is zero below r
            bool reduced_any = false;
            for (std::size_t i = r; i < m.size(); ++i) {
                if (i == pivot || m[i][col] == 0) continue;
                const std::int64_t q = m[i][col] / m[pivot][col];
                for (int a = 0; a < dim; ++a) m[i][a] -= q * m[pivot][a];
                reduced_any = reduced_any || m[i][col] != 0;
            }
            if (!reduced_any) {
                std::swap(m[pivot], m[r]);
                det *= m[r][col];
                ++r;
                break;
            }
        }
    }
    if (r < static_cast<std::size_t>(dim)) return 0;
    return std::llabs(det);
}

Kernel Kernel::validate(const KernelSpec& spec) {
    if (spec.dim < 1 || spec.dim > kMaxDim)
        throw Error(Errc::ConfigError, "kernel dim out of range");
    if (spec.range < 1) throw Error(Errc::ConfigError, "kernel range must be positive");
    if (spec.weights.empty()) throw Error(Errc::ConfigError, "kernel weight table is empty");

    std::map<std::vector<int>, double> table;
    for (const auto& [off, w] : spec.weights) {
        std::vector<int> key(off.begin(), off.begin() + spec.dim);
        if (table.count(key)) throw Error(Errc::ConfigError, "duplicate kernel offset");
        table[key] = w;
    }

    double total = 0.0;
    for (const auto& [off, w] : table) {
        if (w < 0.0) throw Error(Errc::NonStochastic, "negative weight");
        total += w;
        int l1 = 0;
        for (int x : off) l1 += std::abs(x);
        if (w != 0.0 && l1 > spec.range)
            throw Error(Errc::RangeViolation, "offset beyond range v in graph distance");
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(Errc::NonStochastic, "weights sum to " + std::to_string(total));

    for (const auto& [off, w] : table) {
        std::vector<int> neg(off.size());
        for (std::size_t a = 0; a < off.size(); ++a) neg[a] = -off[a];
        auto it = table.find(neg);
        const double wneg = it == table.end() ? 0.0 : it->second;
        if (w != wneg) throw Error(Errc::Asymmetric, "p(j) != p(-j)");
    }

    std::vector<Coord> gens;
    for (const auto& [off, w] : table) {
        if (w == 0.0) continue;
        Coord c{};
        std::copy(off.begin(), off.end(), c.begin());
        gens.push_back(c);
    }
    if (lattice_index(gens, spec.dim) != 1)
        throw Error(Errc::NotFullDimensional, "support does not generate Z^d");

    Kernel k;
    k.spec_ = spec;
    k.dim_ = spec.dim;
    k.range_ = spec.range;
    for (const auto& [off, w] : table) {
        if (w == 0.0) continue;
        Coord c{};
        std::copy(off.begin(), off.end(), c.begin());
        k.offsets_.push_back(c);
        k.weights_.push_back(w);
    }

    // Detect the canonical nearest-neighbor walk (fast paths key off this).
    k.is_srw_ = true;
    if (k.offsets_.size() != static_cast<std::size_t>(2 * spec.dim)) k.is_srw_ = false;
    for (std::size_t i = 0; i < k.offsets_.size() && k.is_srw_; ++i) {
        if (l1_norm(k.offsets_[i], spec.dim) != 1) k.is_srw_ = false;
        if (std::abs(k.weights_[i] - 1.0 / (2.0 * spec.dim)) > 1e-15) k.is_srw_ = false;
    }
    return k;
}

Kernel Kernel::srw(int dim) {
    KernelSpec spec;
    spec.dim = dim;
    spec.range = 1;
    for (int a = 0; a < dim; ++a) {
        Coord plus{}, minus{};
        plus[a] = 1;
        minus[a] = -1;
        spec.weights.emplace_back(plus, 1.0 / (2.0 * dim));
        spec.weights.emplace_back(minus, 1.0 / (2.0 * dim));
    }
    return validate(spec);
}

void Kernel::apply(const Field& field, Field& out) const {
    if (field.dim() != dim_) throw Error(Errc::MismatchedConfigs, "field dim != kernel dim");
    if (field.side() < 2 * range_ + 1)
        throw Error(Errc::DomainTooSmall, "torus side must be >= 2v+1");
    if (field.has_neg_inf()) throw Error(Errc::InfiniteValue, "apply_kernel requires a finite field");
    if (!out.same_shape(field)) out = Field(field.dim(), field.side());

    const int L = field.side();
    // Per-axis wrap table: wrapped coordinate for x + off with x in [0,L),
    // |off| <= v.
    std::vector<int> wrap(static_cast<std::size_t>(L + 2 * range_));
    for (int i = 0; i < L + 2 * range_; ++i) wrap[static_cast<std::size_t>(i)] = ((i - range_) % L + L) % L;

    std::array<std::size_t, kMaxDim> stride{};
    stride[static_cast<std::size_t>(dim_ - 1)] = 1;
    for (int a = dim_ - 2; a >= 0; --a)
        stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(L);

    Coord c{};
    const std::size_t n = field.size();
    for (std::size_t flat = 0; flat < n; ++flat) {
        double acc = 0.0;
        for (std::size_t o = 0; o < offsets_.size(); ++o) {
            std::size_t idx = 0;
            for (int a = 0; a < dim_; ++a)
                idx += stride[static_cast<std::size_t>(a)] *
                       static_cast<std::size_t>(wrap[static_cast<std::size_t>(c[a] + offsets_[o][a] + range_)]);
            acc += weights_[o] * field[idx];
        }
        out[flat] = acc;
        for (int a = dim_ - 1; a >= 0; --a) {
            if (++c[a] < L) break;
            c[a] = 0;
        }
    }
}

Field Kernel::apply(const Field& field) const {
    Field out(field.dim(), field.side());
    apply(field, out);
    return out;
}

std::map<std::vector<int>, double> Kernel::m_step_probs(int m, int radius) const {
    if (m < 0) throw Error(Errc::ConfigError, "m must be nonnegative");
    if (radius < range_ * m)
        throw Error(Errc::RadiusTooSmall, "radius must be >= v*m");

    const int S = 2 * radius + 1;
    std::size_t sz = 1;
    for (int a = 0; a < dim_; ++a) sz *= static_cast<std::size_t>(S);
    std::vector<double> cur(sz, 0.0), next(sz, 0.0);

    std::array<std::size_t, kMaxDim> stride{};
    stride[static_cast<std::size_t>(dim_ - 1)] = 1;
    for (int a = dim_ - 2; a >= 0; --a)
        stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(S);
    std::size_t center = 0;
    for (int a = 0; a < dim_; ++a) center += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(radius);
    cur[center] = 1.0;

    for (int step = 0; step < m; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        Coord c{};
        for (std::size_t flat = 0; flat < sz; ++flat) {
            const double val = cur[flat];
            if (val != 0.0) {
                for (std::size_t o = 0; o < offsets_.size(); ++o) {
                    bool inside = true;
                    std::size_t idx = 0;
                    for (int a = 0; a < dim_; ++a) {
                        const int x = c[a] + offsets_[o][a];
                        if (x < 0 || x >= S) { inside = false; break; }
                        idx += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(x);
                    }
                    // radius >= v*m guarantees no mass ever leaves the box
                    if (inside) next[idx] += weights_[o] * val;
                }
            }
            for (int a = dim_ - 1; a >= 0; --a) {
                if (++c[a] < S) break;
                c[a] = 0;
            }
        }
        std::swap(cur, next);
    }

    std::map<std::vector<int>, double> result;
    Coord c{};
    for (std::size_t flat = 0; flat < sz; ++flat) {
        if (cur[flat] != 0.0) {
            std::vector<int> off(static_cast<std::size_t>(dim_));
            for (int a = 0; a < dim_; ++a) off[static_cast<std::size_t>(a)] = c[a] - radius;
            result[off] = cur[flat];
        }
        for (int a = dim_ - 1; a >= 0; --a) {
            if (++c[a] < S) break;
            c[a] = 0;
        }
    }
    return result;
}

} // namespace harness
