#include "harness/dynamics.hpp"

#include <algorithm>
#include <cmath>

#if defined(__AVX512F__) && defined(__AVX512DQ__)
#include <immintrin.h>
#define HARNESS_AVX512 1
#endif

#include "harness/wall.hpp"

namespace harness {

namespace {

inline double combine_w2(double x, double w) {
    if (w == kNegInf) return x;
    const double d = x - w;
    return w + (d > 0.0 ? d : 0.0);
}

inline double combine_w3(double x, double w) {
    if (w == kNegInf) return x;
    const double d = w - x;
    return x + (d > 0.0 ? d : 0.0);
}

// Fused convolve+noise+exclusion step for the d=3 nearest-neighbor kernel.
// Neighbor accumulation order matches the generic path (offsets in
// lexicographic order), so both paths produce identical doubles.
template <bool HasWall, class NoiseFn>
void advance_srw3(const double* prev, const double* wall, double* out, int L,
                  NoiseFn&& eps) {
    const std::size_t L2 = static_cast<std::size_t>(L) * static_cast<std::size_t>(L);
    constexpr double w = 1.0 / 6.0;
    for (int z = 0; z < L; ++z) {
        const double* plane = prev + static_cast<std::size_t>(z) * L2;
        const double* plane_zm = prev + static_cast<std::size_t>(z == 0 ? L - 1 : z - 1) * L2;
        const double* plane_zp = prev + static_cast<std::size_t>(z == L - 1 ? 0 : z + 1) * L2;
        for (int y = 0; y < L; ++y) {
            const double* row = plane + static_cast<std::size_t>(y) * L;
            const double* row_ym = plane + static_cast<std::size_t>(y == 0 ? L - 1 : y - 1) * L;
            const double* row_yp = plane + static_cast<std::size_t>(y == L - 1 ? 0 : y + 1) * L;
            const double* row_zm = plane_zm + static_cast<std::size_t>(y) * L;
            const double* row_zp = plane_zp + static_cast<std::size_t>(y) * L;
            const std::size_t f0 = (static_cast<std::size_t>(z) * L + static_cast<std::size_t>(y)) * L;
            for (int x = 0; x < L; ++x) {
                const int xm = x == 0 ? L - 1 : x - 1;
                const int xp = x == L - 1 ? 0 : x + 1;
                double acc = 0.0;
                acc += w * row_zm[x];
                acc += w * row_ym[x];
                acc += w * row[xm];
                acc += w * row[xp];
                acc += w * row_yp[x];
                acc += w * row_zp[x];
                const std::size_t f = f0 + static_cast<std::size_t>(x);
                const double v = acc + eps(f);
                out[f] = HasWall ? combine_w2(v, wall[f]) : v;
            }
        }
    }
}

bool fused_applicable(const Kernel& k) { return k.is_srw() && k.dim() == 3; }

#ifdef HARNESS_AVX512

// 8-lane splitmix64 finalizer, lane-identical to rng::mix.
inline __m512i mix8(__m512i x) {
    x = _mm512_add_epi64(x, _mm512_set1_epi64(static_cast<long long>(0x9e3779b97f4a7c15ULL)));
    x = _mm512_xor_si512(x, _mm512_srli_epi64(x, 30));
    x = _mm512_mullo_epi64(x, _mm512_set1_epi64(static_cast<long long>(0xbf58476d1ce4e5b9ULL)));
    x = _mm512_xor_si512(x, _mm512_srli_epi64(x, 27));
    x = _mm512_mullo_epi64(x, _mm512_set1_epi64(static_cast<long long>(0x94d049bb133111ebULL)));
    x = _mm512_xor_si512(x, _mm512_srli_epi64(x, 31));
    return x;
}

// log(x) for normal positive x: x = f * 2^e with f in [1,2), then
// log f = 2 atanh((f-1)/(f+1)) by odd series in s^2 (s <= 1/3, so the s^19
// term is below 1e-11 relative).
inline __m512d log8(__m512d x) {
    const __m512d one = _mm512_set1_pd(1.0);
    const __m512d f = _mm512_getmant_pd(x, _MM_MANT_NORM_1_2, _MM_MANT_SIGN_zero);
    const __m512d e = _mm512_getexp_pd(x);
    const __m512d s = _mm512_div_pd(_mm512_sub_pd(f, one), _mm512_add_pd(f, one));
    const __m512d s2 = _mm512_mul_pd(s, s);
    __m512d p = _mm512_set1_pd(1.0 / 19.0);
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 17.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 15.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 13.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 11.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 9.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 7.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 5.0));
    p = _mm512_fmadd_pd(p, s2, _mm512_set1_pd(1.0 / 3.0));
    p = _mm512_fmadd_pd(p, s2, one);
    const __m512d logf = _mm512_mul_pd(_mm512_add_pd(s, s), p);
    return _mm512_fmadd_pd(e, _mm512_set1_pd(0x1.62e42fefa39efp-1), logf);
}

// Acklam tail branch, vectorized: q = sqrt(-2 log u), rational in q.
inline __m512d tail8(__m512d ut) {
    const __m512d q = _mm512_sqrt_pd(_mm512_mul_pd(_mm512_set1_pd(-2.0), log8(ut)));
    __m512d num = _mm512_set1_pd(-7.784894002430293e-03);
    num = _mm512_fmadd_pd(num, q, _mm512_set1_pd(-3.223964580411365e-01));
    num = _mm512_fmadd_pd(num, q, _mm512_set1_pd(-2.400758277161838e+00));
    num = _mm512_fmadd_pd(num, q, _mm512_set1_pd(-2.549732539343734e+00));
    num = _mm512_fmadd_pd(num, q, _mm512_set1_pd(4.374664141464968e+00));
    num = _mm512_fmadd_pd(num, q, _mm512_set1_pd(2.938163982698783e+00));
    __m512d den = _mm512_set1_pd(7.784695709041462e-03);
    den = _mm512_fmadd_pd(den, q, _mm512_set1_pd(3.224671290700398e-01));
    den = _mm512_fmadd_pd(den, q, _mm512_set1_pd(2.445134137142996e+00));
    den = _mm512_fmadd_pd(den, q, _mm512_set1_pd(3.754408661907416e+00));
    den = _mm512_fmadd_pd(den, q, _mm512_set1_pd(1.0));
    return _mm512_div_pd(num, den);
}

// Acklam central branch across 8 lanes; tail lanes (under 5% of draws)
// rerouted through the vector tail branch and blended back in.
inline __m512d normal8(__m512i h, __m512d vsigma) {
    const __m512d u = _mm512_mul_pd(
        _mm512_add_pd(_mm512_cvtepu64_pd(_mm512_srli_epi64(h, 11)), _mm512_set1_pd(0.5)),
        _mm512_set1_pd(0x1.0p-53));
    const __m512d q = _mm512_sub_pd(u, _mm512_set1_pd(0.5));
    const __m512d r = _mm512_mul_pd(q, q);
    __m512d num = _mm512_set1_pd(-3.969683028665376e+01);
    num = _mm512_fmadd_pd(num, r, _mm512_set1_pd(2.209460984245205e+02));
    num = _mm512_fmadd_pd(num, r, _mm512_set1_pd(-2.759285104469687e+02));
    num = _mm512_fmadd_pd(num, r, _mm512_set1_pd(1.383577518672690e+02));
    num = _mm512_fmadd_pd(num, r, _mm512_set1_pd(-3.066479806614716e+01));
    num = _mm512_fmadd_pd(num, r, _mm512_set1_pd(2.506628277459239e+00));
    __m512d den = _mm512_set1_pd(-5.447609879822406e+01);
    den = _mm512_fmadd_pd(den, r, _mm512_set1_pd(1.615858368580409e+02));
    den = _mm512_fmadd_pd(den, r, _mm512_set1_pd(-1.556989798598866e+02));
    den = _mm512_fmadd_pd(den, r, _mm512_set1_pd(6.680131188771972e+01));
    den = _mm512_fmadd_pd(den, r, _mm512_set1_pd(-1.328068155288572e+01));
    den = _mm512_fmadd_pd(den, r, _mm512_set1_pd(1.0));
    __m512d val = _mm512_div_pd(_mm512_mul_pd(num, q), den);
    const __mmask8 tails =
        _mm512_cmp_pd_mask(u, _mm512_set1_pd(0.02425), _CMP_LT_OQ) |
        _mm512_cmp_pd_mask(u, _mm512_set1_pd(1.0 - 0.02425), _CMP_GT_OQ);
    if (tails) {
        const __m512d one = _mm512_set1_pd(1.0);
        const __m512d uflip = _mm512_sub_pd(one, u);
        // tail8 gives the lower-tail (negative) value; mirror it for the
        // upper-tail lanes.
        __m512d tv = tail8(_mm512_min_pd(u, uflip));
        const __mmask8 upper = _mm512_cmp_pd_mask(u, _mm512_set1_pd(0.5), _CMP_GT_OQ);
        tv = _mm512_mask_sub_pd(tv, upper, _mm512_setzero_pd(), tv);
        val = _mm512_mask_blend_pd(tails, val, tv);
    }
    return _mm512_mul_pd(val, vsigma);
}

// Fused d=3 stencil step with inline Gaussian noise, 8 sites per iteration.
// The x-axis wrap is absorbed into the first and last chunk of each row via
// lane shuffles, so every chunk runs the same straight-line vector code.
// Requires L >= 9.
void advance_srw3_gauss_avx512(const double* prev, const double* wall, double* out, int L,
                               std::uint64_t base, double sigma) {
    const std::size_t L2 = static_cast<std::size_t>(L) * static_cast<std::size_t>(L);
    const __m512d vw = _mm512_set1_pd(1.0 / 6.0);
    const __m512d vsigma = _mm512_set1_pd(sigma);
    const __m512d vneginf = _mm512_set1_pd(kNegInf);
    const std::uint64_t su = rng::kSiteStride;
    const __m512i iota = _mm512_setr_epi64(
        0, static_cast<long long>(su), static_cast<long long>(2 * su),
        static_cast<long long>(3 * su), static_cast<long long>(4 * su),
        static_cast<long long>(5 * su), static_cast<long long>(6 * su),
        static_cast<long long>(7 * su));

    for (int z = 0; z < L; ++z) {
        const double* plane = prev + static_cast<std::size_t>(z) * L2;
        const double* plane_zm = prev + static_cast<std::size_t>(z == 0 ? L - 1 : z - 1) * L2;
        const double* plane_zp = prev + static_cast<std::size_t>(z == L - 1 ? 0 : z + 1) * L2;
        for (int y = 0; y < L; ++y) {
            const double* row = plane + static_cast<std::size_t>(y) * L;
            const double* rym = plane + static_cast<std::size_t>(y == 0 ? L - 1 : y - 1) * L;
            const double* ryp = plane + static_cast<std::size_t>(y == L - 1 ? 0 : y + 1) * L;
            const double* rzm = plane_zm + static_cast<std::size_t>(y) * L;
            const double* rzp = plane_zp + static_cast<std::size_t>(y) * L;
            const std::size_t f0 = (static_cast<std::size_t>(z) * L + static_cast<std::size_t>(y)) * L;
            auto chunk = [&](int x, __mmask8 m, bool full, __m512d left, __m512d right) {
                __m512d acc;
                if (full) {
                    acc = _mm512_add_pd(_mm512_loadu_pd(rzm + x), _mm512_loadu_pd(rym + x));
                    acc = _mm512_add_pd(acc, left);
                    acc = _mm512_add_pd(acc, right);
                    acc = _mm512_add_pd(acc, _mm512_loadu_pd(ryp + x));
                    acc = _mm512_add_pd(acc, _mm512_loadu_pd(rzp + x));
                } else {
                    acc = _mm512_add_pd(_mm512_maskz_loadu_pd(m, rzm + x),
                                        _mm512_maskz_loadu_pd(m, rym + x));
                    acc = _mm512_add_pd(acc, left);
                    acc = _mm512_add_pd(acc, right);
                    acc = _mm512_add_pd(acc, _mm512_maskz_loadu_pd(m, ryp + x));
                    acc = _mm512_add_pd(acc, _mm512_maskz_loadu_pd(m, rzp + x));
                }
                acc = _mm512_mul_pd(acc, vw);
                const std::size_t f = f0 + static_cast<std::size_t>(x);
                const __m512i ctr = _mm512_add_epi64(
                    _mm512_set1_epi64(static_cast<long long>(base + rng::kSiteStride * f)), iota);
                const __m512d eps = normal8(mix8(ctr), vsigma);
                __m512d v = _mm512_add_pd(acc, eps);
                if (wall) {
                    const __m512d wv = full ? _mm512_loadu_pd(wall + f)
                                            : _mm512_maskz_loadu_pd(m, wall + f);
                    const __m512d res = _mm512_add_pd(
                        wv, _mm512_max_pd(_mm512_sub_pd(v, wv), _mm512_setzero_pd()));
                    const __mmask8 free_m = _mm512_cmp_pd_mask(wv, vneginf, _CMP_EQ_OQ);
                    v = _mm512_mask_blend_pd(free_m, res, v);
                }
                if (full)
                    _mm512_storeu_pd(out + f, v);
                else
                    _mm512_mask_storeu_pd(out + f, m, v);
            };
            {
                const __m512d cur = _mm512_loadu_pd(row);
                const __m512d wrapl = _mm512_castsi512_pd(_mm512_alignr_epi64(
                    _mm512_castpd_si512(cur),
                    _mm512_castpd_si512(_mm512_set1_pd(row[L - 1])), 7));
                chunk(0, 0xff, true, wrapl, _mm512_loadu_pd(row + 1));
            }
            int x = 8;
            for (; x + 9 <= L; x += 8)
                chunk(x, 0xff, true, _mm512_loadu_pd(row + x - 1), _mm512_loadu_pd(row + x + 1));
            {
                const int rem = L - x; // 1..8, right neighbor wraps
                const __mmask8 m = static_cast<__mmask8>(rem == 8 ? 0xffu : (1u << rem) - 1u);
                __m512d right = _mm512_maskz_loadu_pd(static_cast<__mmask8>(m >> 1), row + x + 1);
                right = _mm512_mask_broadcastsd_pd(right, static_cast<__mmask8>(1u << (rem - 1)),
                                                   _mm_load_sd(row));
                const __m512d left = rem == 8 ? _mm512_loadu_pd(row + x - 1)
                                              : _mm512_maskz_loadu_pd(m, row + x - 1);
                chunk(x, m, rem == 8, left, right);
            }
        }
    }
}

#endif // HARNESS_AVX512

struct Workspace {
    Field conv;
    Field noise;
};

// One generic step: conv then combine. `w3` flips the combine form.
void generic_step(const Field& prev, const Field* wall, const Kernel& kernel,
                  const Field& noise, Field& out, Field& scratch, bool w3) {
    kernel.apply(prev, scratch);
    const std::size_t n = prev.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = scratch[i] + noise[i];
        const double w = wall ? (*wall)[i] : kNegInf;
        out[i] = w3 ? combine_w3(x, w) : combine_w2(x, w);
    }
}

void check_coupled(const std::vector<ProcessConfig>& cfgs) {
    if (cfgs.empty()) throw Error(Errc::MismatchedConfigs, "no processes given");
    const auto& ref = cfgs.front();
    for (const auto& c : cfgs) {
        if (c.side != ref.side || c.steps != ref.steps ||
            c.kernel.dim() != ref.kernel.dim() ||
            c.kernel.offsets() != ref.kernel.offsets() ||
            c.kernel.weights() != ref.kernel.weights() ||
            c.noise.key != ref.noise.key ||
            c.noise.spec.family != ref.noise.spec.family ||
            c.noise.spec.alpha != ref.noise.spec.alpha ||
            c.noise.spec.sigma != ref.noise.spec.sigma)
            throw Error(Errc::MismatchedConfigs,
                        "coupled processes must share kernel, domain, steps and noise stream");
        if (c.wall && (c.wall->dim() != c.kernel.dim() || c.wall->side() != c.side))
            throw Error(Errc::MismatchedConfigs, "wall shape does not match domain");
    }
}

// Noise-free wall step, used by the nu recursion. Fused stencil when the
// kernel allows it, generic convolve + combine otherwise.
void nu_advance(const Field& prev, const Field& wall, const Kernel& kernel,
                Field& out, Field& scratch) {
    if (fused_applicable(kernel)) {
        advance_srw3<true>(prev.data(), wall.data(), out.data(), prev.side(),
                           [](std::size_t) { return 0.0; });
        return;
    }
    kernel.apply(prev, scratch);
    for (std::size_t i = 0; i < prev.size(); ++i)
        out[i] = combine_w2(scratch[i], wall[i]);
}

bool wall_is_free(const Field* wall) {
    if (!wall) return true;
    for (std::size_t i = 0; i < wall->size(); ++i)
        if ((*wall)[i] != kNegInf) return false;
    return true;
}

} // namespace

void step_w2(const Field& prev, const Field* wall, const Kernel& kernel,
             const Field& noise, Field& out) {
    Field scratch(prev.dim(), prev.side());
    if (!out.same_shape(prev)) out = Field(prev.dim(), prev.side());
    generic_step(prev, wall, kernel, noise, out, scratch, false);
}

void step_w3(const Field& prev, const Field* wall, const Kernel& kernel,
             const Field& noise, Field& out) {
    Field scratch(prev.dim(), prev.side());
    if (!out.same_shape(prev)) out = Field(prev.dim(), prev.side());
    generic_step(prev, wall, kernel, noise, out, scratch, true);
}

Field init_field(const ProcessConfig& cfg) {
    const int dim = cfg.kernel.dim();
    Field f(dim, cfg.side);
    switch (cfg.init) {
    case InitKind::ZeroJoinWall:
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double w = cfg.wall ? (*cfg.wall)[i] : kNegInf;
            f[i] = std::max(0.0, w);
        }
        break;
    case InitKind::Level:
        if (!std::isfinite(cfg.level)) throw Error(Errc::InfiniteValue, "Level init requires finite r");
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double w = cfg.wall ? (*cfg.wall)[i] : kNegInf;
            f[i] = std::max(cfg.level, w);
        }
        break;
    case InitKind::FreeLevel:
        if (!std::isfinite(cfg.level)) throw Error(Errc::InfiniteValue, "FreeLevel init requires finite r");
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = cfg.level;
        break;
    }
    return f;
}

Trajectory run(const ProcessConfig& cfg) {
    auto result = run_coupled({cfg});
    return std::move(result.front());
}

std::vector<Trajectory> run_coupled(const std::vector<ProcessConfig>& cfgs,
                                    const StepCallback& callback) {
    check_coupled(cfgs);
    const std::size_t np = cfgs.size();
    const Kernel& kernel = cfgs.front().kernel;
    const int steps = cfgs.front().steps;
    const int side = cfgs.front().side;
    const NoiseStream& stream = cfgs.front().noise;
    const bool fused = fused_applicable(kernel);

    std::vector<Field> cur(np), nxt(np);
    std::vector<Trajectory> out(np);
    std::vector<const Field*> walls(np);
    for (std::size_t p = 0; p < np; ++p) {
        cur[p] = init_field(cfgs[p]);
        nxt[p] = Field(kernel.dim(), side);
        walls[p] = wall_is_free(cfgs[p].wall.get()) ? nullptr : cfgs[p].wall.get();
        out[p].origin.reserve(static_cast<std::size_t>(steps) + 1);
        out[p].origin.push_back(cur[p].origin());
        if (cfgs[p].record_fields) out[p].fields.push_back(cur[p]);
    }

    // Single process without callback: noise can be generated inline inside
    // the fused stencil pass.
    const bool inline_noise = fused && np == 1 && !callback;

    Field noise;
    if (!inline_noise) noise = Field(kernel.dim(), side);
    Field scratch(kernel.dim(), side);

    for (int n = 1; n <= steps; ++n) {
        if (inline_noise) {
            const std::uint64_t base = rng::step_base(stream.key, n);
            const NoiseSpec& spec = stream.spec;
            auto run_one = [&](auto eps) {
                if (walls[0])
                    advance_srw3<true>(cur[0].data(), walls[0]->data(), nxt[0].data(), side, eps);
                else
                    advance_srw3<false>(cur[0].data(), nullptr, nxt[0].data(), side, eps);
            };
            if (spec.family == TailFamily::Gaussian) {
                const double sigma = spec.sigma;
#ifdef HARNESS_AVX512
                if (side >= 9) {
                    advance_srw3_gauss_avx512(cur[0].data(), walls[0] ? walls[0]->data() : nullptr,
                                              nxt[0].data(), side, base, sigma);
                } else {
                    run_one([base, sigma](std::size_t f) {
                        return sigma * rng::normal_quantile(rng::to_unit(rng::site_hash(base, f)));
                    });
                }
#else
                run_one([base, sigma](std::size_t f) {
                    return sigma * rng::normal_quantile(rng::to_unit(rng::site_hash(base, f)));
                });
#endif
            } else {
                const double a = spec.family == TailFamily::Laplace ? 1.0 : spec.alpha;
                const double sigma = spec.sigma;
                run_one([base, a, sigma](std::size_t f) {
                    return rng::stretched_exp_quantile(rng::to_unit(rng::site_hash(base, f)), a, sigma);
                });
            }
        } else {
            stream.fill(n, noise);
            for (std::size_t p = 0; p < np; ++p) {
                if (fused) {
                    const double* nb = noise.data();
                    auto eps = [nb](std::size_t f) { return nb[f]; };
                    if (walls[p])
                        advance_srw3<true>(cur[p].data(), walls[p]->data(), nxt[p].data(), side, eps);
                    else
                        advance_srw3<false>(cur[p].data(), nullptr, nxt[p].data(), side, eps);
                } else {
                    generic_step(cur[p], walls[p], kernel, noise, nxt[p], scratch, false);
                }
            }
        }
        for (std::size_t p = 0; p < np; ++p) {
            std::swap(cur[p], nxt[p]);
            out[p].origin.push_back(cur[p].origin());
            if (cfgs[p].record_fields) out[p].fields.push_back(cur[p]);
        }
        if (callback) callback(n, cur, noise);
    }

    for (std::size_t p = 0; p < np; ++p) out[p].final_field = std::move(cur[p]);
    return out;
}

Field nu_init(const Field& wall) {
    Field f(wall.dim(), wall.side());
    for (std::size_t i = 0; i < wall.size(); ++i) f[i] = std::max(0.0, wall[i]);
    return f;
}

void nu_step(const Field& prev, const Field& wall, const Kernel& kernel, Field& out) {
    if (!out.same_shape(prev)) out = Field(prev.dim(), prev.side());
    Field scratch(prev.dim(), prev.side());
    nu_advance(prev, wall, kernel, out, scratch);
}

Field run_nu(const Kernel& kernel, const Field& wall, int steps) {
    Field cur = nu_init(wall);
    Field nxt(wall.dim(), wall.side());
    Field scratch(wall.dim(), wall.side());
    for (int n = 1; n <= steps; ++n) {
        nu_advance(cur, wall, kernel, nxt, scratch);
        std::swap(cur, nxt);
    }
    return cur;
}

SandwichReport nu_sandwich_check(const Kernel& kernel, const Field& tilde_wall,
                                 std::size_t site, int n) {
    auto [without, only] = decompose_at(tilde_wall, site);
    SandwichReport rep;
    Field full = nu_init(tilde_wall), a = nu_init(without), b = nu_init(only);
    Field full2(tilde_wall.dim(), tilde_wall.side()), a2 = full2, b2 = full2;
    Field scratch = full2;
    auto record = [&]() {
        for (std::size_t i = 0; i < full.size(); ++i) {
            rep.lower_violation = std::max(rep.lower_violation, std::max(a[i], b[i]) - full[i]);
            rep.upper_violation = std::max(rep.upper_violation, full[i] - (a[i] + b[i]));
        }
    };
    record();
    for (int k = 1; k <= n; ++k) {
        nu_advance(full, tilde_wall, kernel, full2, scratch);
        nu_advance(a, without, kernel, a2, scratch);
        nu_advance(b, only, kernel, b2, scratch);
        std::swap(full, full2);
        std::swap(a, a2);
        std::swap(b, b2);
        record();
    }
    return rep;
}

} // namespace harness
