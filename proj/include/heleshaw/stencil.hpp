#pragma once

#include "heleshaw/grid.hpp"

namespace heleshaw {

namespace detail {
template <typename Scalar>
void require_stencil_grid(const GridT<Scalar>& g) {
    if (g.cells < 3)
        throw std::invalid_argument("stencil: grid needs at least 3 cells per axis");
}
}  // namespace detail

/// Second-order central Laplacian, homogeneous Neumann ghost cells at the box
/// boundary (mirror: ghost value equals the boundary cell value, so no flux
/// crosses the box face).
template <typename Scalar>
void laplacian_into(const FieldT<Scalar>& f, FieldT<Scalar>& out) {
    detail::require_stencil_grid(f.grid);
    const int n = f.grid.cells;
    const Scalar ih2 = Scalar(1) / (f.grid.h() * f.grid.h());
    if (out.values.size() != f.values.size()) out = FieldT<Scalar>(f.grid);
    const Scalar* v = f.values.data();
    Scalar* o = out.values.data();
    if (f.grid.dim == 1) {
        o[0] = (v[1] - v[0]) * ih2;
        for (int i = 1; i < n - 1; ++i) o[i] = (v[i - 1] - 2 * v[i] + v[i + 1]) * ih2;
        o[n - 1] = (v[n - 2] - v[n - 1]) * ih2;
        return;
    }
    for (int j = 0; j < n; ++j) {
        const Scalar* row = v + Eigen::Index(j) * n;
        const Scalar* rlo = v + Eigen::Index(j == 0 ? j : j - 1) * n;
        const Scalar* rhi = v + Eigen::Index(j == n - 1 ? j : j + 1) * n;
        Scalar* orow = o + Eigen::Index(j) * n;
        orow[0] = (row[1] - row[0] + rlo[0] + rhi[0] - 2 * row[0]) * ih2;
        for (int i = 1; i < n - 1; ++i)
            orow[i] =
                (row[i - 1] + row[i + 1] + rlo[i] + rhi[i] - 4 * row[i]) * ih2;
        orow[n - 1] = (row[n - 2] - row[n - 1] + rlo[n - 1] + rhi[n - 1] -
                       2 * row[n - 1]) * ih2;
    }
}

template <typename Scalar>
FieldT<Scalar> laplacian(const FieldT<Scalar>& f) {
    FieldT<Scalar> out(f.grid);
    laplacian_into(f, out);
    return out;
}

/// |grad f|^2 by central differences, same Neumann ghosts as the Laplacian.
template <typename Scalar>
void grad_sq_into(const FieldT<Scalar>& f, FieldT<Scalar>& out) {
    detail::require_stencil_grid(f.grid);
    const int n = f.grid.cells;
    const Scalar i2h = Scalar(1) / (2 * f.grid.h());
    if (out.values.size() != f.values.size()) out = FieldT<Scalar>(f.grid);
    const Scalar* v = f.values.data();
    Scalar* o = out.values.data();
    if (f.grid.dim == 1) {
        auto d = [&](int im, int i, int ip) {
            (void)i;
            return (v[ip] - v[im]) * i2h;
        };
        o[0] = d(0, 0, 1) * d(0, 0, 1);
        for (int i = 1; i < n - 1; ++i) {
            const Scalar dx = (v[i + 1] - v[i - 1]) * i2h;
            o[i] = dx * dx;
        }
        const Scalar dx = (v[n - 1] - v[n - 2]) * i2h;
        o[n - 1] = dx * dx;
        return;
    }
    for (int j = 0; j < n; ++j) {
        const Scalar* row = v + Eigen::Index(j) * n;
        const Scalar* rlo = v + Eigen::Index(j == 0 ? j : j - 1) * n;
        const Scalar* rhi = v + Eigen::Index(j == n - 1 ? j : j + 1) * n;
        Scalar* orow = o + Eigen::Index(j) * n;
        auto at = [&](int i) {
            const int im = i == 0 ? 0 : i - 1;
            const int ip = i == n - 1 ? n - 1 : i + 1;
            const Scalar dx = (row[ip] - row[im]) * i2h;
            const Scalar dy = (rhi[i] - rlo[i]) * i2h;
            return dx * dx + dy * dy;
        };
        orow[0] = at(0);
        for (int i = 1; i < n - 1; ++i) {
            const Scalar dx = (row[i + 1] - row[i - 1]) * i2h;
            const Scalar dy = (rhi[i] - rlo[i]) * i2h;
            orow[i] = dx * dx + dy * dy;
        }
        orow[n - 1] = at(n - 1);
    }
}

template <typename Scalar>
FieldT<Scalar> grad_sq(const FieldT<Scalar>& f) {
    FieldT<Scalar> out(f.grid);
    grad_sq_into(f, out);
    return out;
}

}  // namespace heleshaw
