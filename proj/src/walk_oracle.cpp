#include "harness/walk_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace harness {

namespace {

std::size_t pow_size(int dim, int side) {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(side);
    return s;
}

} // namespace

FirstReturnDP::FirstReturnDP(const Kernel& kernel, int horizon)
    : kernel_(kernel), horizon_(horizon), radius_(kernel.range() * horizon) {
    if (horizon < 1) throw Error(Errc::ConfigError, "horizon must be >= 1");
    const int side = 2 * radius_ + 1;
    f_ = Field(kernel_.dim(), side);
    cum_ = Field(kernel_.dim(), side);

    // f_1(j) = p(j, 0) = p(-j) = p(j).
    for (std::size_t o = 0; o < kernel_.offsets().size(); ++o) {
        Coord c = kernel_.offsets()[o];
        f_[box_index(c)] = kernel_.weights()[o];
    }
    const std::size_t center = box_index(Coord{});
    origin_returns_.push_back(f_[center]);
    returned_mass_ = f_[center];
    f_[center] = 0.0;
    for (std::size_t i = 0; i < f_.size(); ++i) cum_[i] += f_[i];
    cum_[center] = returned_mass_;
}

std::size_t FirstReturnDP::box_index(const Coord& offset) const {
    std::size_t flat = 0;
    const int side = 2 * radius_ + 1;
    for (int a = 0; a < kernel_.dim(); ++a) {
        const int x = offset[a] + radius_;
        if (x < 0 || x >= side) throw Error(Errc::DomainTooSmall, "offset outside DP box");
        flat = flat * static_cast<std::size_t>(side) + static_cast<std::size_t>(x);
    }
    return flat;
}

void FirstReturnDP::step() {
    if (k_ >= horizon_) throw Error(Errc::ConfigError, "DP already at horizon");
    const int side = 2 * radius_ + 1;
    const int dim = kernel_.dim();
    const int v = kernel_.range();

    // f_{k+1}(j) = sum_off p(off) f_k(j + off); f_k(0) is already zeroed, so
    // paths through the origin are excluded. Support of f_{k+1} lies in the
    // L-inf box of radius min(v*(k+1), radius), which bounds the loops.
    const int act = std::min(radius_, v * (k_ + 1));

    Field next(dim, side);
    std::array<std::size_t, kMaxDim> stride{};
    stride[static_cast<std::size_t>(dim - 1)] = 1;
    for (int a = dim - 2; a >= 0; --a)
        stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(side);

    Coord c{};
    for (int a = 0; a < dim; ++a) c[a] = -act;
    for (;;) {
        std::size_t flat = 0;
        for (int a = 0; a < dim; ++a)
            flat += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(c[a] + radius_);
        double acc = 0.0;
        for (std::size_t o = 0; o < kernel_.offsets().size(); ++o) {
            std::size_t idx = 0;
            bool inside = true;
            for (int a = 0; a < dim; ++a) {
                const int x = c[a] + kernel_.offsets()[o][a] + radius_;
                if (x < 0 || x >= side) { inside = false; break; }
                idx += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(x);
            }
            if (inside) acc += kernel_.weights()[o] * f_[idx];
        }
        next[flat] = acc;

        int a = dim - 1;
        for (; a >= 0; --a) {
            if (++c[a] <= act) break;
            c[a] = -act;
        }
        if (a < 0) break;
    }

    const std::size_t center = box_index(Coord{});
    origin_returns_.push_back(next[center]);
    returned_mass_ += next[center];
    next[center] = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) cum_[i] += next[i];
    cum_[center] = returned_mass_;
    f_ = std::move(next);
    ++k_;
}

void FirstReturnDP::run_to(int k) {
    while (k_ < k) step();
}

double FirstReturnDP::cumulative_at(const Coord& offset) const {
    return cum_[box_index(offset)];
}

double FirstReturnDP::conservation_defect() const {
    double mass = 0.0;
    for (std::size_t i = 0; i < f_.size(); ++i) mass += f_[i];
    return std::abs(mass + returned_mass_ - 1.0);
}

FirstReturnTable first_return_probs(const Kernel& kernel, int horizon) {
    FirstReturnDP dp(kernel, horizon);
    dp.run_to(horizon);
    FirstReturnTable t;
    t.horizon = horizon;
    t.radius = dp.radius();
    t.origin_returns = dp.origin_returns();
    t.cumulative = dp.cumulative();
    return t;
}

namespace {

// One-dimensional +-1 walk return probabilities q_m = C(m, m/2) 2^-m.
std::vector<double> nn_axis_returns(int n) {
    std::vector<double> q(static_cast<std::size_t>(n) + 1, 0.0);
    q[0] = 1.0;
    for (int m = 2; m <= n; m += 2)
        q[static_cast<std::size_t>(m)] =
            q[static_cast<std::size_t>(m - 2)] * (m - 1) / static_cast<double>(m);
    return q;
}

// P_new[k] = sum_m Binom(k, m; p) q[m] P_old[k - m], with the binomial mass
// truncated far from its mode (absolute cutoff; every factor is <= 1).
std::vector<double> binomial_merge(const std::vector<double>& q,
                                   const std::vector<double>& pold, double p) {
    const int n = static_cast<int>(q.size()) - 1;
    std::vector<double> out(q.size(), 0.0);
    const double lp = std::log(p), l1p = std::log1p(-p);
    std::vector<double> lfact(q.size());
    lfact[0] = 0.0;
    for (int i = 1; i <= n; ++i) lfact[static_cast<std::size_t>(i)] = lfact[static_cast<std::size_t>(i - 1)] + std::log(i);
    constexpr double cutoff = 1e-22;

    for (int k = 0; k <= n; ++k) {
        const int mode = std::min(k, static_cast<int>((k + 1) * p));
        const double lb0 = lfact[static_cast<std::size_t>(k)] - lfact[static_cast<std::size_t>(mode)] -
                           lfact[static_cast<std::size_t>(k - mode)] + mode * lp + (k - mode) * l1p;
        const double b0 = std::exp(lb0);
        double acc = 0.0;
        double b = b0;
        for (int m = mode; m <= k; ++m) {
            acc += b * q[static_cast<std::size_t>(m)] * pold[static_cast<std::size_t>(k - m)];
            if (b < cutoff) break;
            b *= p / (1.0 - p) * (k - m) / static_cast<double>(m + 1);
        }
        b = b0;
        for (int m = mode - 1; m >= 0; --m) {
            b *= (1.0 - p) / p * (m + 1) / static_cast<double>(k - m);
            acc += b * q[static_cast<std::size_t>(m)] * pold[static_cast<std::size_t>(k - m)];
            if (b < cutoff) break;
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

std::vector<double> unrestricted_returns_dp(const Kernel& kernel, int horizon) {
    // Plain (un-killed) forward DP on the exact box.
    const int radius = kernel.range() * horizon;
    const int side = 2 * radius + 1;
    const int dim = kernel.dim();
    const std::size_t sz = pow_size(dim, side);
    std::vector<double> cur(sz, 0.0), next(sz, 0.0);
    std::array<std::size_t, kMaxDim> stride{};
    stride[static_cast<std::size_t>(dim - 1)] = 1;
    for (int a = dim - 2; a >= 0; --a)
        stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(side);
    std::size_t center = 0;
    for (int a = 0; a < dim; ++a) center += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(radius);
    cur[center] = 1.0;

    std::vector<double> p(static_cast<std::size_t>(horizon) + 1, 0.0);
    p[0] = 1.0;
    for (int k = 1; k <= horizon; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        Coord c{};
        for (std::size_t flat = 0; flat < sz; ++flat) {
            const double val = cur[flat];
            if (val != 0.0) {
                for (std::size_t o = 0; o < kernel.offsets().size(); ++o) {
                    std::size_t idx = 0;
                    bool inside = true;
                    for (int a = 0; a < dim; ++a) {
                        const int x = c[a] + kernel.offsets()[o][a];
                        if (x < 0 || x >= side) { inside = false; break; }
                        idx += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(x);
                    }
                    if (inside) next[idx] += kernel.weights()[o] * val;
                }
            }
            for (int a = dim - 1; a >= 0; --a) {
                if (++c[a] < side) break;
                c[a] = 0;
            }
        }
        std::swap(cur, next);
        p[static_cast<std::size_t>(k)] = cur[center];
    }
    return p;
}

} // namespace

std::vector<double> unrestricted_returns(const Kernel& kernel, int horizon) {
    if (!kernel.is_srw()) return unrestricted_returns_dp(kernel, horizon);
    const int d = kernel.dim();
    std::vector<double> p = nn_axis_returns(horizon);
    for (int j = 2; j <= d; ++j) {
        // thinning: each step of a j-axis walk uses the newest axis w.p. 1/j
        p = binomial_merge(nn_axis_returns(horizon), p, 1.0 / j);
    }
    return p;
}

ReturnSum return_sum(const Kernel& kernel, int horizon) {
    if (horizon < 10) throw Error(Errc::ConfigError, "horizon too short for return_sum");
    const std::vector<double> p = unrestricted_returns(kernel, horizon);

    // Renewal identity: p_k = sum_{m<=k} f_m p_{k-m} with p_0 = 1.
    ReturnSum rs;
    rs.first_returns.assign(static_cast<std::size_t>(horizon), 0.0);
    for (int k = 1; k <= horizon; ++k) {
        double acc = p[static_cast<std::size_t>(k)];
        for (int m = 1; m < k; ++m)
            acc -= rs.first_returns[static_cast<std::size_t>(m - 1)] * p[static_cast<std::size_t>(k - m)];
        rs.first_returns[static_cast<std::size_t>(k - 1)] = acc;
    }
    rs.a_n = std::accumulate(rs.first_returns.begin(), rs.first_returns.end(), 0.0);

    // Heuristic tail: fit p_k ~ A k^-s over the last decade (local CLT gives
    // s = d/2), reuse the exponent for f_k, extrapolate the sum beyond N.
    const int lo = std::max(2, horizon / 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0, nonzero_stride = 1;
    {
        // detect parity support (nearest-neighbor walks return on even steps)
        bool odd_all_zero = true;
        for (int k = 1; k <= horizon; k += 2)
            if (p[static_cast<std::size_t>(k)] != 0.0) { odd_all_zero = false; break; }
        if (odd_all_zero) nonzero_stride = 2;
    }
    for (int k = lo; k <= horizon; ++k) {
        const double pk = p[static_cast<std::size_t>(k)];
        if (pk <= 0.0) continue;
        const double x = std::log(static_cast<double>(k)), y = std::log(pk);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 4) throw Error(Errc::ConfigError, "not enough support for tail fit");
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double s = -slope;
    rs.decay_exponent = s;
    if (s <= 1.0) {
        // recurrent-looking decay; no finite tail estimate, report the rest mass
        rs.tail = 1.0 - rs.a_n;
        return rs;
    }

    // amplitude from the first-return sequence itself on the same window
    double amp = 0.0;
    int acnt = 0;
    for (int k = std::max(lo, 2); k <= horizon; ++k) {
        const double fk = rs.first_returns[static_cast<std::size_t>(k - 1)];
        if (fk <= 0.0) continue;
        amp += fk * std::pow(static_cast<double>(k), s);
        ++acnt;
    }
    amp /= acnt;
    constexpr double safety = 1.3;
    rs.tail = safety * amp / nonzero_stride * std::pow(static_cast<double>(horizon), 1.0 - s) / (s - 1.0);
    return rs;
}

double nu_closed_form(const Kernel& kernel, double spike, const Coord& site, int n) {
    if (spike <= 0.0) throw Error(Errc::NonpositiveSpike, "spike height must be positive");
    if (l1_norm(site, kernel.dim()) == 0) return spike;
    FirstReturnDP dp(kernel, n);
    dp.run_to(n);
    return spike * dp.cumulative_at(site);
}

double p_nu_origin(const Kernel& kernel, double spike, int n) {
    if (spike <= 0.0) throw Error(Errc::NonpositiveSpike, "spike height must be positive");
    FirstReturnDP dp(kernel, n + 1);
    dp.run_to(n + 1);
    double acc = 0.0;
    for (double r : dp.origin_returns()) acc += r;
    return spike * acc;
}

} // namespace harness
