#include "harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <memory>
#include <thread>

#include "harness/errors.hpp"

namespace harness {

namespace {

std::uint64_t hash_double(std::uint64_t h, double x) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    return rng::mix(h ^ bits);
}

std::uint64_t growth_fingerprint(const GrowthConfig& cfg, const std::vector<int>& times) {
    std::uint64_t h = rng::mix(cfg.seed);
    h = rng::mix(h ^ static_cast<std::uint64_t>(cfg.side));
    h = rng::mix(h ^ static_cast<std::uint64_t>(cfg.replicates));
    h = rng::mix(h ^ static_cast<std::uint64_t>(cfg.quenched ? 1 : 0));
    h = rng::mix(h ^ static_cast<std::uint64_t>(cfg.init));
    h = hash_double(h, cfg.level);
    h = rng::mix(h ^ static_cast<std::uint64_t>(cfg.noise.family));
    h = hash_double(h, cfg.noise.alpha);
    h = hash_double(h, cfg.noise.sigma);
    h = rng::mix(h ^ static_cast<std::uint64_t>(cfg.wall.family));
    h = hash_double(h, cfg.wall.theta);
    h = hash_double(h, cfg.wall.sigma);
    h = hash_double(h, cfg.wall.level);
    h = hash_double(h, cfg.wall.q_neginf);
    const auto& offs = cfg.kernel.offsets();
    const auto& ws = cfg.kernel.weights();
    for (std::size_t j = 0; j < offs.size(); ++j) {
        for (int a = 0; a < cfg.kernel.dim(); ++a)
            h = rng::mix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(offs[j][a])));
        h = hash_double(h, ws[j]);
    }
    for (int t : times) h = rng::mix(h ^ static_cast<std::uint64_t>(t));
    return h;
}

} // namespace

std::vector<int> geometric_times(int max_n) {
    if (max_n < 1) throw Error(Errc::ConfigError, "max_n must be >= 1");
    std::vector<int> out;
    for (int n = 1; n <= max_n; n *= 2) {
        out.push_back(n);
        if (n > max_n / 2) break;
    }
    return out;
}

GrowthCurve estimate_growth(const GrowthConfig& cfg, const std::vector<int>& times) {
    if (times.empty()) throw Error(Errc::ConfigError, "empty time grid");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw Error(Errc::ConfigError, "time grid must be strictly increasing");
    cfg.noise.check();
    cfg.wall.check();
    const int steps = times.back();
    const int nt = static_cast<int>(times.size());

    GrowthCurve curve;
    curve.times = times;
    curve.replicates = cfg.replicates;
    curve.fingerprint = growth_fingerprint(cfg, times);
    curve.samples.assign(static_cast<std::size_t>(nt),
                         std::vector<double>(static_cast<std::size_t>(cfg.replicates), 0.0));

    std::shared_ptr<const Field> quenched_wall;
    if (cfg.quenched && cfg.wall.family != WallFamily::NegInfinity)
        quenched_wall = std::make_shared<Field>(sample_wall(
            cfg.wall, rng::derive(cfg.seed, rng::kTagWall, 0), cfg.kernel.dim(), cfg.side));

    auto run_replicate = [&](int r) {
        ProcessConfig pc;
        pc.kernel = cfg.kernel;
        pc.init = cfg.init;
        pc.level = cfg.level;
        pc.steps = steps;
        pc.side = cfg.side;
        pc.noise = NoiseStream{rng::derive(cfg.seed, rng::kTagNoise, static_cast<std::uint64_t>(r)),
                               cfg.noise};
        if (cfg.wall.family != WallFamily::NegInfinity) {
            if (cfg.quenched)
                pc.wall = quenched_wall;
            else
                pc.wall = std::make_shared<Field>(sample_wall(
                    cfg.wall, rng::derive(cfg.seed, rng::kTagWall, static_cast<std::uint64_t>(r)),
                    cfg.kernel.dim(), cfg.side));
        }
        Trajectory traj = run(pc);
        for (int t = 0; t < nt; ++t)
            curve.samples[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] =
                traj.origin[static_cast<std::size_t>(times[static_cast<std::size_t>(t)])];
    };

    const int nthreads = std::max(1, cfg.threads);
    if (nthreads == 1 || cfg.replicates < 2) {
        for (int r = 0; r < cfg.replicates; ++r) run_replicate(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < cfg.replicates; r = next.fetch_add(1))
                    run_replicate(r);
            });
        for (auto& th : pool) th.join();
    }

    curve.mean.resize(static_cast<std::size_t>(nt));
    curve.se.resize(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        const auto& s = curve.samples[static_cast<std::size_t>(t)];
        double m = 0.0;
        for (double v : s) m += v;
        m /= static_cast<double>(s.size());
        double var = 0.0;
        for (double v : s) var += (v - m) * (v - m);
        var = s.size() > 1 ? var / static_cast<double>(s.size() - 1) : 0.0;
        curve.mean[static_cast<std::size_t>(t)] = m;
        curve.se[static_cast<std::size_t>(t)] = std::sqrt(var / static_cast<double>(s.size()));
    }
    return curve;
}

namespace {

struct FitInput {
    std::vector<double> x, y, w;
    int lo = 0, hi = 0;
};

// log(mean) vs log(log n) over the n >= 16 window; throws on too few points
// or no net growth.
FitInput fit_points(const std::vector<int>& times, const std::vector<double>& mean,
                    const std::vector<double>& se, bool strict) {
    FitInput in;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 16 || mean[i] <= 0.0) continue;
        if (in.x.empty()) {
            in.lo = times[i];
            first = mean[i];
        }
        in.hi = times[i];
        last = mean[i];
        in.x.push_back(std::log(std::log(static_cast<double>(times[i]))));
        in.y.push_back(std::log(mean[i]));
        const double wt = (i < se.size() && se[i] > 0.0) ? (mean[i] / se[i]) * (mean[i] / se[i]) : 1.0;
        in.w.push_back(wt);
    }
    if (strict) {
        if (in.x.size() < 5)
            throw Error(Errc::InsufficientGrowth,
                        "need at least 5 positive means at n >= 16, have " +
                            std::to_string(in.x.size()));
        if (last <= first)
            throw Error(Errc::InsufficientGrowth, "no net growth across the fit window");
    }
    return in;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    bool ok = false;
};

LineFit wls(const FitInput& in) {
    LineFit f;
    if (in.x.size() < 2) return f;
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < in.x.size(); ++i) {
        sw += in.w[i];
        sx += in.w[i] * in.x[i];
        sy += in.w[i] * in.y[i];
        sxx += in.w[i] * in.x[i] * in.x[i];
        sxy += in.w[i] * in.x[i] * in.y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (det <= 0.0) return f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / sw;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / sw;
    for (std::size_t i = 0; i < in.x.size(); ++i) {
        const double e = in.y[i] - (f.intercept + f.slope * in.x[i]);
        ss_res += in.w[i] * e * e;
        ss_tot += in.w[i] * (in.y[i] - ybar) * (in.y[i] - ybar);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.ok = true;
    return f;
}

} // namespace

ExponentFit fit_exponent(const GrowthCurve& curve, std::uint64_t bootstrap_seed, int resamples) {
    if (curve.times.size() != curve.mean.size())
        throw Error(Errc::ConfigError, "curve times/means length mismatch");
    FitInput in = fit_points(curve.times, curve.mean, curve.se, true);
    LineFit base = wls(in);
    if (!base.ok) throw Error(Errc::InsufficientGrowth, "degenerate fit window");

    ExponentFit fit;
    fit.gamma_inv = base.slope;
    fit.c = std::exp(base.intercept);
    fit.r2 = base.r2;
    fit.window_lo = in.lo;
    fit.window_hi = in.hi;
    fit.resamples = resamples;

    if (resamples > 0) {
        const std::uint64_t key = rng::derive(bootstrap_seed, rng::kTagBootstrap);
        const bool have_samples =
            !curve.samples.empty() && curve.samples.size() == curve.times.size() &&
            !curve.samples.front().empty();
        std::vector<double> slopes;
        slopes.reserve(static_cast<std::size_t>(resamples));
        std::vector<double> bmean(curve.mean.size());
        for (int b = 0; b < resamples; ++b) {
            const std::uint64_t bb = rng::step_base(key, b);
            if (have_samples) {
                const std::size_t reps = curve.samples.front().size();
                std::vector<std::size_t> pick(reps);
                for (std::size_t r = 0; r < reps; ++r)
                    pick[r] = rng::site_hash(bb, r) % reps;
                for (std::size_t t = 0; t < curve.samples.size(); ++t) {
                    double m = 0.0;
                    for (std::size_t r = 0; r < reps; ++r)
                        m += curve.samples[t][pick[r]];
                    bmean[t] = m / static_cast<double>(reps);
                }
            } else {
                for (std::size_t t = 0; t < curve.mean.size(); ++t)
                    bmean[t] = curve.mean[t] +
                               curve.se[t] * rng::normal_quantile(
                                                 rng::to_unit(rng::site_hash(bb, t)));
            }
            FitInput bin = fit_points(curve.times, bmean, curve.se, false);
            LineFit bf = wls(bin);
            if (bf.ok) slopes.push_back(bf.slope);
        }
        if (slopes.size() >= 10) {
            std::sort(slopes.begin(), slopes.end());
            const auto pct = [&](double p) {
                const double idx = p * static_cast<double>(slopes.size() - 1);
                const std::size_t i0 = static_cast<std::size_t>(idx);
                const std::size_t i1 = std::min(i0 + 1, slopes.size() - 1);
                const double frac = idx - static_cast<double>(i0);
                return slopes[i0] * (1.0 - frac) + slopes[i1] * frac;
            };
            fit.ci_lo = pct(0.025);
            fit.ci_hi = pct(0.975);
        } else {
            fit.ci_lo = fit.ci_hi = fit.gamma_inv;
        }
    } else {
        fit.ci_lo = fit.ci_hi = fit.gamma_inv;
    }
    return fit;
}

MuRecursionReport mu_recursion_check(const Kernel& kernel, const NoiseSpec& noise,
                                     const WallSpec& wall, int side, int steps,
                                     int replicates, std::uint64_t seed,
                                     const std::vector<double>& c0_sweep) {
    noise.check();
    wall.check();
    if (replicates < 2) throw Error(Errc::ConfigError, "need at least 2 replicates");
    MuRecursionReport rep;
    rep.q = wall.q_nonneg();
    const std::size_t ns = static_cast<std::size_t>(steps) + 1;
    std::vector<std::vector<double>> origin(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
        ProcessConfig pc;
        pc.kernel = kernel;
        pc.steps = steps;
        pc.side = side;
        pc.noise = NoiseStream{rng::derive(seed, rng::kTagNoise, static_cast<std::uint64_t>(r)), noise};
        if (wall.family != WallFamily::NegInfinity) {
            Field w = sample_wall(wall, rng::derive(seed, rng::kTagWall, static_cast<std::uint64_t>(r)),
                                  kernel.dim(), side);
            pc.wall = std::make_shared<Field>(hat_transform(w));
        }
        origin[static_cast<std::size_t>(r)] = run(pc).origin;
    }
    rep.mu.assign(ns, 0.0);
    for (const auto& o : origin)
        for (std::size_t n = 0; n < ns; ++n) rep.mu[n] += o[n];
    for (std::size_t n = 0; n < ns; ++n) rep.mu[n] /= static_cast<double>(replicates);
    rep.se_diff.assign(ns, 0.0);
    for (std::size_t n = 1; n < ns; ++n) {
        const double md = rep.mu[n] - rep.mu[n - 1];
        double var = 0.0;
        for (const auto& o : origin) {
            const double d = o[n] - o[n - 1] - md;
            var += d * d;
        }
        var /= static_cast<double>(replicates - 1);
        rep.se_diff[n] = std::sqrt(var / static_cast<double>(replicates));
    }

    rep.c0_values = c0_sweep;
    rep.smallest_passing_c0 = -1.0;
    rep.largest_passing_c0 = -1.0;
    for (double c0 : c0_sweep) {
        bool holds = true;
        for (std::size_t n = 1; n < ns && holds; ++n) {
            const double lhs = rep.mu[n] - rep.mu[n - 1] + 3.0 * rep.se_diff[n];
            const double rhs = expected_excess(noise, rep.mu[n - 1] + c0) * rep.q;
            if (lhs < rhs) holds = false;
        }
        rep.c0_holds.push_back(holds);
        if (holds) {
            rep.any_passed = true;
            if (rep.smallest_passing_c0 < 0.0 || c0 < rep.smallest_passing_c0)
                rep.smallest_passing_c0 = c0;
            if (c0 > rep.largest_passing_c0) rep.largest_passing_c0 = c0;
        }
    }
    return rep;
}

UpperBoundReport upper_bound_experiment(const Kernel& kernel, const NoiseSpec& noise,
                                        const WallSpec& wall, int side, int n, double K,
                                        int replicates, std::uint64_t seed,
                                        double r_override) {
    noise.check();
    wall.check();
    const double alpha = noise.tail_exponent();
    if (alpha <= 1.0)
        throw Error(Errc::AlphaOutOfRange, "started-high bound needs tail exponent alpha > 1");
    if (n < 2) throw Error(Errc::ConfigError, "n must be >= 2");
    const int d = kernel.dim();
    const double logn = std::log(static_cast<double>(n));
    const bool random_wall = wall.family == WallFamily::Gaussian ||
                             wall.family == WallFamily::StretchedExponential ||
                             wall.family == WallFamily::Laplace;
    const double theta = wall.family == WallFamily::Laplace ? 1.0 : wall.theta;

    UpperBoundReport rep;
    rep.replicates = replicates;
    const double ex_noise = std::max(1.0 / alpha, 2.0 / (2.0 + static_cast<double>(d)));
    double a_n = 2.0 * K * std::pow(logn, ex_noise);
    if (random_wall) {
        a_n += 2.0 * K * std::pow(logn, 1.0 / theta);
        rep.threshold_rn = K * std::pow(logn, 1.0 / theta);
    }
    rep.a_n = a_n;
    rep.r_n = r_override >= 0.0 ? r_override : a_n / 2.0;

    const int v = kernel.range();
    rep.running_max_truncated = side < 2 * v * n + 1;

    int exceed = 0, decouple = 0, rmax_over = 0;
    for (int r = 0; r < replicates; ++r) {
        std::shared_ptr<Field> wf;
        if (wall.family != WallFamily::NegInfinity)
            wf = std::make_shared<Field>(sample_wall(
                wall, rng::derive(seed, rng::kTagWall, static_cast<std::uint64_t>(r)),
                kernel.dim(), side));
        NoiseStream ns{rng::derive(seed, rng::kTagNoise, static_cast<std::uint64_t>(r)), noise};
        ProcessConfig low{kernel, wf, InitKind::ZeroJoinWall, 0.0, n, ns, side};
        ProcessConfig high{kernel, wf, InitKind::Level, rep.r_n, n, ns, side};
        ProcessConfig free_high{kernel, nullptr, InitKind::FreeLevel, rep.r_n, n, ns, side};
        int viol = 0;
        auto traj = run_coupled({low, high, free_high},
                                [&](int, const std::vector<Field>& s, const Field&) {
                                    for (std::size_t i = 0; i < s[0].size(); ++i)
                                        if (s[0][i] > s[1][i]) ++viol;
                                });
        rep.domination_violations += viol > 0 ? 1 : 0;
        if (traj[0].origin.back() >= a_n) ++exceed;
        if (traj[1].origin.back() != traj[2].origin.back()) ++decouple;
        if (random_wall && wf) {
            double rmax;
            if (rep.running_max_truncated) {
                rmax = kNegInf;
                for (std::size_t i = 0; i < wf->size(); ++i) rmax = std::max(rmax, (*wf)[i]);
            } else {
                rmax = running_max(*wf, n, v);
            }
            if (rmax > rep.threshold_rn) ++rmax_over;
        }
    }
    const double nr = static_cast<double>(replicates);
    rep.p_exceed = exceed / nr;
    rep.p_decouple = decouple / nr;
    rep.p_running_max = rmax_over / nr;
    return rep;
}

} // namespace harness
