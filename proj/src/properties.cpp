#include "harness/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <fmt/format.h>

#include "harness/errors.hpp"
#include "harness/walk_oracle.hpp"

namespace harness {

namespace {

double neg_part(double a) { return a < 0.0 ? -a : 0.0; }

void note_violation(PropertyResult& rep, bool& trial_bad, double magnitude,
                    std::uint64_t seed, int trial, int step, std::size_t site) {
    if (magnitude > rep.worst) rep.worst = magnitude;
    if (!trial_bad) {
        trial_bad = true;
        ++rep.violations;
        if (rep.first_violation.empty())
            rep.first_violation = fmt::format("seed={} trial={} step={} site={}",
                                              seed, trial, step, site);
    }
}

double conv_at_origin(const Field& f, const Kernel& kernel) {
    double acc = 0.0;
    const auto& offs = kernel.offsets();
    const auto& ws = kernel.weights();
    for (std::size_t j = 0; j < offs.size(); ++j) acc += ws[j] * f.at(offs[j]);
    return acc;
}

} // namespace

PropertyResult check_w2_w3_identity(const std::vector<int>& dims, int trials,
                                    std::uint64_t seed, double tolerance) {
    PropertyResult rep;
    rep.name = "w2_w3_identity";
    rep.trials = trials;
    if (dims.empty()) throw Error(Errc::ConfigError, "no dimensions given");
    for (int t = 0; t < trials; ++t) {
        const int dim = dims[static_cast<std::size_t>(t) % dims.size()];
        const std::uint64_t key = rng::derive(seed, rng::kTagReplicate, static_cast<std::uint64_t>(t));
        const int side = 5 + 2 * static_cast<int>(rng::mix(key) % 3); // 5, 7 or 9
        const Kernel kernel = Kernel::srw(dim);
        Field state(dim, side), wall(dim, side), noise(dim, side);
        const std::uint64_t bs = rng::step_base(rng::derive(key, rng::kTagNoise, 1), 0);
        const std::uint64_t bw = rng::step_base(rng::derive(key, rng::kTagWall, 1), 0);
        const std::uint64_t be = rng::step_base(rng::derive(key, rng::kTagNoise, 2), 0);
        for (std::size_t i = 0; i < state.size(); ++i) {
            state[i] = 3.0 * rng::normal_quantile(rng::to_unit(rng::site_hash(bs, i)));
            const std::uint64_t hw = rng::site_hash(bw, i);
            const double uw = rng::to_unit(hw);
            wall[i] = uw < 0.15 ? kNegInf : 2.0 * rng::normal_quantile(rng::to_unit(rng::mix(hw)));
            noise[i] = rng::normal_quantile(rng::to_unit(rng::site_hash(be, i)));
        }
        Field out2(dim, side), out3(dim, side);
        step_w2(state, &wall, kernel, noise, out2);
        step_w3(state, &wall, kernel, noise, out3);
        bool bad = false;
        for (std::size_t i = 0; i < out2.size(); ++i) {
            const double d = std::fabs(out2[i] - out3[i]);
            if (d > tolerance) note_violation(rep, bad, d, seed, t, 1, i);
        }
    }
    return rep;
}

PropertyResult check_wall_monotonicity(const PropertyOptions& opt) {
    PropertyResult rep;
    rep.name = opt.mutant_drop_wall ? "wall_monotonicity[mutant]" : "wall_monotonicity";
    rep.trials = opt.trials;
    const Kernel kernel = Kernel::srw(opt.dim);
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t key = rng::derive(opt.seed, rng::kTagReplicate, static_cast<std::uint64_t>(t));
        Field wa = sample_wall(opt.wall, rng::derive(key, rng::kTagWall, 0), opt.dim, opt.side);
        Field wb = sample_wall(opt.wall, rng::derive(key, rng::kTagWall, 1), opt.dim, opt.side);
        auto lo = std::make_shared<Field>(opt.dim, opt.side);
        auto hi = std::make_shared<Field>(opt.dim, opt.side);
        for (std::size_t i = 0; i < wa.size(); ++i) {
            (*lo)[i] = std::min(wa[i], wb[i]);
            (*hi)[i] = std::max(wa[i], wb[i]);
        }
        NoiseStream noise{rng::derive(key, rng::kTagNoise), opt.noise};
        ProcessConfig c0{kernel, lo, InitKind::ZeroJoinWall, 0.0, opt.steps, noise, opt.side};
        ProcessConfig c1{kernel, opt.mutant_drop_wall ? nullptr : hi,
                         InitKind::ZeroJoinWall, 0.0, opt.steps, noise, opt.side};
        ProcessConfig c2{kernel, hi, InitKind::Level, 1.0, opt.steps, noise, opt.side};
        bool bad = false;
        {
            Field f0 = init_field(c0), f1 = init_field(c1), f2 = init_field(c2);
            for (std::size_t i = 0; i < f0.size(); ++i) {
                if (f0[i] - f1[i] > opt.tolerance)
                    note_violation(rep, bad, f0[i] - f1[i], opt.seed, t, 0, i);
                if (f1[i] - f2[i] > opt.tolerance)
                    note_violation(rep, bad, f1[i] - f2[i], opt.seed, t, 0, i);
            }
        }
        run_coupled({c0, c1, c2}, [&](int n, const std::vector<Field>& s, const Field&) {
            for (std::size_t i = 0; i < s[0].size(); ++i) {
                if (s[0][i] - s[1][i] > opt.tolerance)
                    note_violation(rep, bad, s[0][i] - s[1][i], opt.seed, t, n, i);
                if (s[1][i] - s[2][i] > opt.tolerance)
                    note_violation(rep, bad, s[1][i] - s[2][i], opt.seed, t, n, i);
            }
        });
    }
    return rep;
}

PropertyResult check_hat_chain(const PropertyOptions& opt) {
    PropertyResult rep;
    rep.name = "hat_chain";
    rep.trials = opt.trials;
    const Kernel kernel = Kernel::srw(opt.dim);
    const std::vector<double> p0 = unrestricted_returns(kernel, std::max(opt.steps - 1, 0));
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t key = rng::derive(opt.seed, rng::kTagReplicate, static_cast<std::uint64_t>(t));
        Field w = sample_wall(opt.wall, rng::derive(key, rng::kTagWall), opt.dim, opt.side);
        auto hat = std::make_shared<Field>(hat_transform(w));
        auto hat0 = std::make_shared<Field>(*hat);
        (*hat0)[0] = 0.0;
        NoiseStream noise{rng::derive(key, rng::kTagNoise), opt.noise};
        ProcessConfig cy{kernel, nullptr, InitKind::FreeLevel, 0.0, opt.steps, noise, opt.side};
        ProcessConfig cx{kernel, hat, InitKind::ZeroJoinWall, 0.0, opt.steps, noise, opt.side};
        ProcessConfig cx0{kernel, hat0, InitKind::ZeroJoinWall, 0.0, opt.steps, noise, opt.side};
        bool bad = false;
        double prev_conv_diff = 0.0, prev_conv_y = 0.0;
        std::vector<double> a_terms(static_cast<std::size_t>(opt.steps) + 1, 0.0);
        run_coupled({cy, cx, cx0}, [&](int n, const std::vector<Field>& s, const Field& eps) {
            const Field& y = s[0];
            const Field& x = s[1];
            const Field& x0 = s[2];
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] - x[i] > opt.tolerance)
                    note_violation(rep, bad, y[i] - x[i], opt.seed, t, n, i);
                if (x[i] - x0[i] > opt.tolerance)
                    note_violation(rep, bad, x[i] - x0[i], opt.seed, t, n, i);
            }
            const double an = neg_part(eps[0]) + neg_part(prev_conv_y);
            a_terms[static_cast<std::size_t>(n)] = an;
            const double diff0 = x0[0] - x[0];
            const double wi_bound = prev_conv_diff + an;
            if (diff0 - wi_bound > opt.tolerance)
                note_violation(rep, bad, diff0 - wi_bound, opt.seed, t, n, 0);
            double iter_bound = 0.0;
            for (int m = 1; m <= n; ++m)
                iter_bound += p0[static_cast<std::size_t>(m - 1)] *
                              a_terms[static_cast<std::size_t>(n - m + 1)];
            if (diff0 - iter_bound > opt.tolerance)
                note_violation(rep, bad, diff0 - iter_bound, opt.seed, t, n, 0);
            prev_conv_y = conv_at_origin(y, kernel);
            double acc = 0.0;
            const auto& offs = kernel.offsets();
            const auto& ws = kernel.weights();
            for (std::size_t j = 0; j < offs.size(); ++j)
                acc += ws[j] * (x0.at(offs[j]) - x.at(offs[j]));
            prev_conv_diff = acc;
        });
    }
    return rep;
}

PropertyResult check_nu_sandwich(const PropertyOptions& opt) {
    PropertyResult rep;
    rep.name = "nu_sandwich";
    rep.trials = opt.trials;
    const Kernel kernel = Kernel::srw(opt.dim);
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t key = rng::derive(opt.seed, rng::kTagReplicate, static_cast<std::uint64_t>(t));
        Field w = sample_wall(opt.wall, rng::derive(key, rng::kTagWall), opt.dim, opt.side);
        Field tilde = tilde_transform(w);
        const std::size_t site = rng::mix(key ^ 0x5bf0u) % tilde.size();
        SandwichReport s = nu_sandwich_check(kernel, tilde, site, opt.steps);
        bool bad = false;
        if (s.lower_violation > opt.tolerance)
            note_violation(rep, bad, s.lower_violation, opt.seed, t, opt.steps, site);
        if (s.upper_violation > opt.tolerance)
            note_violation(rep, bad, s.upper_violation, opt.seed, t, opt.steps, site);
    }
    return rep;
}

PropertyResult check_wall_domination(const PropertyOptions& opt) {
    PropertyResult rep;
    rep.name = "wall_domination";
    rep.trials = opt.trials;
    const Kernel kernel = Kernel::srw(opt.dim);
    Field prev(opt.dim, opt.side), conv(opt.dim, opt.side);
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t key = rng::derive(opt.seed, rng::kTagReplicate, static_cast<std::uint64_t>(t));
        auto wall = std::make_shared<Field>(
            sample_wall(opt.wall, rng::derive(key, rng::kTagWall), opt.dim, opt.side));
        NoiseStream noise{rng::derive(key, rng::kTagNoise), opt.noise};
        ProcessConfig cfg{kernel, wall, InitKind::ZeroJoinWall, 0.0, opt.steps, noise, opt.side};
        prev = init_field(cfg);
        bool bad = false;
        run_coupled({cfg}, [&](int n, const std::vector<Field>& s, const Field& eps) {
            kernel.apply(prev, conv);
            const Field& x = s[0];
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double wv = (*wall)[i];
                if (wv != kNegInf && wv - x[i] > opt.tolerance)
                    note_violation(rep, bad, wv - x[i], opt.seed, t, n, i);
                const double drive = conv[i] + eps[i];
                if (drive - x[i] > opt.tolerance)
                    note_violation(rep, bad, drive - x[i], opt.seed, t, n, i);
            }
            prev = x;
        });
    }
    return rep;
}

std::vector<PropertyResult> run_all_properties(const PropertyOptions& opt) {
    std::vector<PropertyResult> out;
    out.push_back(check_w2_w3_identity({1, 2, 3}, opt.trials, opt.seed, opt.tolerance));
    out.push_back(check_wall_monotonicity(opt));
    out.push_back(check_hat_chain(opt));
    out.push_back(check_nu_sandwich(opt));
    out.push_back(check_wall_domination(opt));
    return out;
}

} // namespace harness
