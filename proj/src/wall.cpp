#include "harness/wall.hpp"

#include <cmath>

namespace harness {

std::string wall_family_name(WallFamily f) {
    switch (f) {
    case WallFamily::Gaussian: return "gaussian";
    case WallFamily::StretchedExponential: return "se";
    case WallFamily::Laplace: return "laplace";
    case WallFamily::DegenerateFlat: return "flat";
    case WallFamily::NegInfinity: return "neginf";
    }
    return "?";
}

WallFamily wall_family_from_name(const std::string& name) {
    if (name == "gaussian") return WallFamily::Gaussian;
    if (name == "se" || name == "stretched_exponential") return WallFamily::StretchedExponential;
    if (name == "laplace") return WallFamily::Laplace;
    if (name == "flat") return WallFamily::DegenerateFlat;
    if (name == "neginf" || name == "free") return WallFamily::NegInfinity;
    throw Error(Errc::ConfigError, "unknown wall family '" + name + "'");
}

void WallSpec::check() const {
    if (q_neginf < 0.0 || q_neginf >= 1.0)
        throw Error(Errc::ConfigError, "wall q_neginf must be in [0,1)");
    if (family == WallFamily::StretchedExponential && theta <= 0.0)
        throw Error(Errc::ConfigError, "wall theta must be positive");
    if ((family == WallFamily::Gaussian || family == WallFamily::StretchedExponential ||
         family == WallFamily::Laplace) && sigma <= 0.0)
        throw Error(Errc::ConfigError, "wall sigma must be positive");
}

double WallSpec::q_nonneg() const {
    double q_finite;
    switch (family) {
    case WallFamily::NegInfinity: return 0.0;
    case WallFamily::DegenerateFlat: q_finite = level >= 0.0 ? 1.0 : 0.0; break;
    default: q_finite = 0.5; break; // symmetric families
    }
    return (1.0 - q_neginf) * q_finite;
}

double wall_quantile(const WallSpec& spec, double u) {
    // The bottom q_neginf quantile mass is the -inf atom; the rest is
    // rescaled onto the finite family.
    if (u < spec.q_neginf) return kNegInf;
    const double v = (u - spec.q_neginf) / (1.0 - spec.q_neginf);
    switch (spec.family) {
    case WallFamily::NegInfinity: return kNegInf;
    case WallFamily::DegenerateFlat: return spec.level;
    case WallFamily::Gaussian:
        return spec.sigma * rng::normal_quantile(v);
    case WallFamily::StretchedExponential:
        return rng::stretched_exp_quantile(v, spec.theta, spec.sigma);
    case WallFamily::Laplace:
        return rng::stretched_exp_quantile(v, 1.0, spec.sigma);
    }
    return kNegInf;
}

Field sample_wall(const WallSpec& spec, std::uint64_t key, int dim, int side) {
    spec.check();
    Field w(dim, side);
    if (spec.family == WallFamily::NegInfinity) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = kNegInf;
        return w;
    }
    const std::uint64_t base = rng::step_base(key, 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = wall_quantile(spec, rng::to_unit(rng::site_hash(base, i)));
    return w;
}

Field hat_transform(const Field& wall) {
    Field out(wall.dim(), wall.side());
    for (std::size_t i = 0; i < wall.size(); ++i)
        out[i] = wall[i] >= 0.0 ? 0.0 : kNegInf;
    return out;
}

Field tilde_transform(const Field& wall) {
    Field out(wall.dim(), wall.side());
    for (std::size_t i = 0; i < wall.size(); ++i)
        out[i] = wall[i] >= 0.0 ? wall[i] : kNegInf;
    return out;
}

std::pair<Field, Field> decompose_at(const Field& wall, std::size_t site) {
    Field without = wall;
    without[site] = kNegInf;
    Field only(wall.dim(), wall.side(), kNegInf);
    only[site] = wall[site];
    return {std::move(without), std::move(only)};
}

double running_max(const Field& wall, int n, int v) {
    const long radius = static_cast<long>(v) * n;
    if (wall.side() < 2 * radius + 1)
        throw Error(Errc::DomainTooSmall, "torus side must be >= 2vn+1 for R_n");
    double best = kNegInf;
    const std::size_t sz = wall.size();
    Coord c{};
    for (std::size_t flat = 0; flat < sz; ++flat) {
        int l1 = 0;
        for (int a = 0; a < wall.dim(); ++a) l1 += std::abs(centered(c[a], wall.side()));
        if (l1 <= radius && wall[flat] > best) best = wall[flat];
        for (int a = wall.dim() - 1; a >= 0; --a) {
            if (++c[a] < wall.side()) break;
            c[a] = 0;
        }
    }
    return best;
}

} // namespace harness
