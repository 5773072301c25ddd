#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace heleshaw {

/// Uniform cell-centered lattice over a box, dim 1 or 2, equal spacing on
/// every axis. Cell i (or (i,j)) is centered at origin + (i + 1/2) h.
template <typename Scalar = double>
struct GridT {
    int dim = 2;
    int cells = 0;       // cells per axis
    Scalar extent = 1;   // box side length
    Eigen::Matrix<Scalar, 2, 1> origin = {0, 0};

    GridT() = default;
    GridT(int dim_, int cells_, Scalar extent_,
          Eigen::Matrix<Scalar, 2, 1> origin_ = {0, 0})
        : dim(dim_), cells(cells_), extent(extent_), origin(origin_) {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
        if (cells <= 0) throw std::invalid_argument("grid: cells_per_axis must be positive");
        if (!(extent > 0)) throw std::invalid_argument("grid: extent must be positive");
    }

    Scalar h() const { return extent / Scalar(cells); }
    Eigen::Index size() const {
        return dim == 1 ? Eigen::Index(cells) : Eigen::Index(cells) * cells;
    }
    Scalar cell_volume() const { return dim == 1 ? h() : h() * h(); }

    // linear index of cell (i,j); column j is the slow axis
    Eigen::Index idx(int i, int j = 0) const { return Eigen::Index(j) * cells + i; }

    Scalar x(int i) const { return origin[0] + (Scalar(i) + Scalar(0.5)) * h(); }
    Scalar y(int j) const { return origin[1] + (Scalar(j) + Scalar(0.5)) * h(); }

    Eigen::Matrix<Scalar, 2, 1> center(Eigen::Index k) const {
        if (dim == 1) return {x(int(k)), 0};
        return {x(int(k % cells)), y(int(k / cells))};
    }

    bool same_as(const GridT& o) const {
        return dim == o.dim && cells == o.cells && extent == o.extent &&
               origin == o.origin;
    }
};

/// One real value per cell. Values live in an Eigen array so fields compose
/// with Eigen expressions; the grid rides along for geometry queries.
template <typename Scalar = double>
struct FieldT {
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    GridT<Scalar> grid;
    Array values;

    FieldT() = default;
    explicit FieldT(const GridT<Scalar>& g) : grid(g), values(Array::Zero(g.size())) {}
    FieldT(const GridT<Scalar>& g, Scalar fill)
        : grid(g), values(Array::Constant(g.size(), fill)) {}

    Scalar& operator()(int i, int j = 0) { return values[grid.idx(i, j)]; }
    Scalar operator()(int i, int j = 0) const { return values[grid.idx(i, j)]; }

    bool all_finite() const { return values.allFinite(); }
};

using Grid = GridT<double>;
using Field = FieldT<double>;

/// Bilinear (linear in 1D) interpolation at an off-lattice point. The field
/// is extended constantly through the outer half-cell ring, consistent with
/// the zero-flux box closure. Throws if the point leaves the box.
template <typename Scalar>
Scalar interpolate(const FieldT<Scalar>& f, const Eigen::Matrix<Scalar, 2, 1>& p) {
    const auto& g = f.grid;
    const Scalar h = g.h();
    for (int a = 0; a < g.dim; ++a) {
        if (p[a] < g.origin[a] || p[a] > g.origin[a] + g.extent)
            throw std::invalid_argument("interpolate: point outside the box");
    }
    auto clampi = [&](int i) { return i < 0 ? 0 : (i >= g.cells ? g.cells - 1 : i); };
    // cell-center coordinates: s = (p - origin)/h - 1/2
    const Scalar sx = (p[0] - g.origin[0]) / h - Scalar(0.5);
    const int i0 = clampi(int(std::floor(sx)));
    const int i1 = clampi(i0 + 1);
    const Scalar tx = std::min(Scalar(1), std::max(Scalar(0), sx - Scalar(i0)));
    if (g.dim == 1) return (1 - tx) * f(i0) + tx * f(i1);
    const Scalar sy = (p[1] - g.origin[1]) / h - Scalar(0.5);
    const int j0 = clampi(int(std::floor(sy)));
    const int j1 = clampi(j0 + 1);
    const Scalar ty = std::min(Scalar(1), std::max(Scalar(0), sy - Scalar(j0)));
    return (1 - tx) * ((1 - ty) * f(i0, j0) + ty * f(i0, j1)) +
           tx * ((1 - ty) * f(i1, j0) + ty * f(i1, j1));
}

/// Samples f at n_angles equispaced points of the circle of given radius
/// (two points center +- radius in 1D). Throws if the circle exits the box.
template <typename Scalar>
std::vector<Scalar> radial_sample(const FieldT<Scalar>& f,
                                  const Eigen::Matrix<Scalar, 2, 1>& center,
                                  Scalar radius, int n_angles) {
    const auto& g = f.grid;
    if (!(radius >= 0)) throw std::invalid_argument("radial_sample: negative radius");
    if (g.dim == 1) {
        return {interpolate(f, Eigen::Matrix<Scalar, 2, 1>{center[0] - radius, 0}),
                interpolate(f, Eigen::Matrix<Scalar, 2, 1>{center[0] + radius, 0})};
    }
    if (n_angles < 8) throw std::invalid_argument("radial_sample: n_angles must be >= 8");
    std::vector<Scalar> out(n_angles);
    const Scalar two_pi = Scalar(2) * Scalar(M_PI);
    for (int k = 0; k < n_angles; ++k) {
        const Scalar th = two_pi * Scalar(k) / Scalar(n_angles);
        Eigen::Matrix<Scalar, 2, 1> p = center;
        p[0] += radius * std::cos(th);
        p[1] += radius * std::sin(th);
        out[k] = interpolate(f, p);
    }
    return out;
}

// --- norms (sequential reductions, bit-reproducible) ---

template <typename Scalar>
Scalar norm_linf(const FieldT<Scalar>& f) {
    return f.values.size() ? f.values.abs().maxCoeff() : Scalar(0);
}

template <typename Scalar>
Scalar norm_l1(const FieldT<Scalar>& f) {
    return f.values.abs().sum() * f.grid.cell_volume();
}

template <typename Scalar>
Scalar integral(const FieldT<Scalar>& f) {
    return f.values.sum() * f.grid.cell_volume();
}

}  // namespace heleshaw
