#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "harness/errors.hpp"

namespace harness {

inline constexpr int kMaxDim = 8;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Coord = std::array<int, kMaxDim>;

// Dense d-dimensional array of extended reals over a cubic torus of side L.
// -inf is a legal value (wall fields only; the dynamics keeps surfaces finite).
class Field {
public:
    Field() = default;
    Field(int dim, int side, double fill = 0.0)
        : dim_(dim), side_(side), data_(pow_size(dim, side), fill) {
        if (dim < 1 || dim > kMaxDim)
            throw Error(Errc::ConfigError, "dim must be in [1," + std::to_string(kMaxDim) + "]");
        if (side < 1) throw Error(Errc::ConfigError, "side must be positive");
    }

    int dim() const { return dim_; }
    int side() const { return side_; }
    std::size_t size() const { return data_.size(); }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }

    // Flat index of a coordinate; each component is wrapped into [0, L).
    std::size_t index(const Coord& c) const {
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a) {
            int x = c[a] % side_;
            if (x < 0) x += side_;
            flat = flat * static_cast<std::size_t>(side_) + static_cast<std::size_t>(x);
        }
        return flat;
    }

    Coord coords(std::size_t flat) const {
        Coord c{};
        for (int a = dim_ - 1; a >= 0; --a) {
            c[a] = static_cast<int>(flat % static_cast<std::size_t>(side_));
            flat /= static_cast<std::size_t>(side_);
        }
        return c;
    }

    double at(const Coord& c) const { return data_[index(c)]; }
    double& at(const Coord& c) { return data_[index(c)]; }

    // Origin = coordinate 0 on every axis (flat index 0).
    double origin() const { return data_[0]; }

    bool has_neg_inf() const {
        for (double x : data_)
            if (x == kNegInf) return true;
        return false;
    }

    bool same_shape(const Field& o) const { return dim_ == o.dim_ && side_ == o.side_; }

private:
    static std::size_t pow_size(int dim, int side) {
        std::size_t s = 1;
        for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(side);
        return s;
    }

    int dim_ = 0;
    int side_ = 0;
    std::vector<double> data_;
};

// Graph (L1) distance from the origin of the offset with components c[0..dim).
inline int l1_norm(const Coord& c, int dim) {
    int s = 0;
    for (int a = 0; a < dim; ++a) s += c[a] < 0 ? -c[a] : c[a];
    return s;
}

// Signed displacement of a torus coordinate from the origin, in (-L/2, L/2].
inline int centered(int x, int side) {
    return x > side / 2 ? x - side : x;
}

} // namespace harness
