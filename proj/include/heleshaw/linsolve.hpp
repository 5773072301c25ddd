#pragma once

#include <functional>

#include "heleshaw/errors.hpp"
#include "heleshaw/stencil.hpp"

namespace heleshaw {

using Array = Eigen::ArrayXd;

/// Matrix-free conjugate gradient for an SPD operator. Iterates until
/// ||r|| <= tol * ||b|| (or ||b|| = 0). Throws SolverError at the cap.
inline Array conjugate_gradient(const std::function<void(const Array&, Array&)>& apply,
                                const Array& b, double tol, int max_iter,
                                const Array* x0 = nullptr) {
    Array x = x0 ? *x0 : Array::Zero(b.size());
    Array ax(b.size());
    apply(x, ax);
    Array r = b - ax;
    const double bnorm = std::sqrt(r.matrix().squaredNorm() + 1e-300);
    const double b0 = std::sqrt(b.matrix().squaredNorm());
    if (b0 == 0.0) return Array::Zero(b.size());
    Array p = r;
    Array ap(b.size());
    double rr = r.matrix().squaredNorm();
    const double stop = tol * b0;
    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= stop) return x;
        apply(p, ap);
        const double pap = p.matrix().dot(ap.matrix());
        if (!(pap > 0)) throw SolverError("cg: operator not positive definite");
        const double alpha = rr / pap;
        x += alpha * p;
        r -= alpha * ap;
        const double rr_new = r.matrix().squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    if (std::sqrt(rr) <= stop) return x;
    (void)bnorm;
    throw SolverError("cg: iteration cap reached without convergence");
}

/// Solves (I + a (-Lap)) x = b with the Neumann box closure.
inline Field solve_helmholtz_neumann(const Field& b, double a, double tol = 1e-10,
                                     const Field* guess = nullptr) {
    Field scratch(b.grid);
    auto apply = [&](const Array& x, Array& out) {
        Field xf(b.grid);
        xf.values = x;
        laplacian_into(xf, scratch);
        out = x - a * scratch.values;
    };
    Field out(b.grid);
    const int cap = 200 + 4 * b.grid.cells * b.grid.dim;
    out.values = conjugate_gradient(apply, b.values, tol, cap,
                                    guess ? &guess->values : nullptr);
    return out;
}

/// Solves -Lap q = rhs on the masked cells with q = 0 on the complement and
/// on the box faces (projected CG: iterates live in the masked subspace).
inline Field solve_poisson_dirichlet_masked(const Field& rhs,
                                            const Eigen::Array<bool, Eigen::Dynamic, 1>& mask,
                                            double tol = 1e-10) {
    const Grid& g = rhs.grid;
    const int n = g.cells;
    const double ih2 = 1.0 / (g.h() * g.h());
    auto apply = [&](const Array& x, Array& out) {
        out.resize(x.size());
        if (g.dim == 1) {
            for (int i = 0; i < n; ++i) {
                if (!mask[i]) { out[i] = 0.0; continue; }
                const double xm = (i > 0 && mask[i - 1]) ? x[i - 1] : 0.0;
                const double xp = (i < n - 1 && mask[i + 1]) ? x[i + 1] : 0.0;
                out[i] = (2.0 * x[i] - xm - xp) * ih2;
            }
            return;
        }
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const Eigen::Index k = g.idx(i, j);
                if (!mask[k]) { out[k] = 0.0; continue; }
                const double xm = (i > 0 && mask[k - 1]) ? x[k - 1] : 0.0;
                const double xp = (i < n - 1 && mask[k + 1]) ? x[k + 1] : 0.0;
                const double ym = (j > 0 && mask[k - n]) ? x[k - n] : 0.0;
                const double yp = (j < n - 1 && mask[k + n]) ? x[k + n] : 0.0;
                out[k] = (4.0 * x[k] - xm - xp - ym - yp) * ih2;
            }
        }
    };
    Array b = mask.select(rhs.values, Array::Zero(rhs.values.size()));
    Field out(g);
    const int cap = 200 + 20 * n * g.dim;
    out.values = conjugate_gradient(apply, b, tol, cap);
    return out;
}

}  // namespace heleshaw
