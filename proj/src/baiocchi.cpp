#include "heleshaw/baiocchi.hpp"

#include <algorithm>
#include <cmath>

namespace heleshaw {

namespace {

// mask of cells within `ring` cells (Chebyshev) of a cell where in != out
Eigen::Array<bool, Eigen::Dynamic, 1> near_boundary(
    const Grid& g, const Eigen::Array<bool, Eigen::Dynamic, 1>& mask, int ring) {
    const int n = g.cells;
    Eigen::Array<bool, Eigen::Dynamic, 1> out =
        Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(mask.size(), false);
    auto mark = [&](int i, int j) {
        for (int dj = -ring; dj <= ring; ++dj) {
            if (g.dim == 1 && dj != 0) continue;
            const int jj = j + dj;
            if (jj < 0 || jj >= (g.dim == 1 ? 1 : n)) continue;
            for (int di = -ring; di <= ring; ++di) {
                const int ii = i + di;
                if (ii < 0 || ii >= n) continue;
                out[g.idx(ii, jj)] = true;
            }
        }
    };
    const int rows = g.dim == 1 ? 1 : n;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < n; ++i) {
            const bool m = mask[g.idx(i, j)];
            const bool edge =
                (i + 1 < n && mask[g.idx(i + 1, j)] != m) ||
                (g.dim == 2 && j + 1 < rows && mask[g.idx(i, j + 1)] != m);
            if (edge) {
                mark(i, j);
                if (i + 1 < n) mark(i + 1, j);
                if (g.dim == 2 && j + 1 < rows) mark(i, j + 1);
            }
        }
    return out;
}

}  // namespace

HittingField hitting_time(const std::vector<WSnapshot>& history, double w_min) {
    if (history.empty()) throw std::invalid_argument("hitting_time: empty history");
    const Grid& g = history.front().w.grid;
    if (w_min <= 0) {
        double wmax = 0.0;
        for (const auto& s : history) wmax = std::max(wmax, s.w.values.maxCoeff());
        w_min = 10.0 * std::numeric_limits<double>::epsilon() * wmax;
    }
    HittingField out{g,
                     Eigen::ArrayXd::Constant(g.size(),
                                              std::numeric_limits<double>::infinity()),
                     w_min};
    for (size_t k = 0; k < history.size(); ++k) {
        const auto& s = history[k];
        for (Eigen::Index c = 0; c < out.T.size(); ++c) {
            if (std::isfinite(out.T[c]) || s.w.values[c] <= w_min) continue;
            if (k == 0) {
                out.T[c] = s.t;
                continue;
            }
            const double w0 = history[k - 1].w.values[c];
            const double w1 = s.w.values[c];
            const double f = (w_min - w0) / (w1 - w0);  // w1 > w_min >= w0 here
            out.T[c] = history[k - 1].t + f * (s.t - history[k - 1].t);
        }
    }
    return out;
}

ObstacleResidual obstacle_residual(const Field& w, const Field& eta,
                                   const Field& rho0, const Field& rho_t,
                                   double w_min) {
    if (w_min <= 0)
        w_min = 10.0 * std::numeric_limits<double>::epsilon() *
                std::max(w.values.maxCoeff(), 1e-300);
    Field lw = laplacian(w);
    Eigen::ArrayXd res =
        (lw.values - (rho_t.values - rho0.values - eta.values)).abs();
    Eigen::Array<bool, Eigen::Dynamic, 1> positivity = w.values > w_min;
    auto ring = near_boundary(w.grid, positivity, 2);
    ObstacleResidual out;
    out.global = res.maxCoeff();
    for (Eigen::Index k = 0; k < res.size(); ++k)
        if (!ring[k]) out.interior = std::max(out.interior, res[k]);
    return out;
}

Field eta_from_T(const HittingField& T,
                 const std::vector<std::pair<double, Field>>& n_history, double t) {
    if (n_history.size() < 2)
        throw std::invalid_argument("eta_from_T: need at least two nutrient snapshots");
    double tmin_T = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < T.T.size(); ++k)
        if (std::isfinite(T.T[k])) tmin_T = std::min(tmin_T, T.T[k]);
    const double cover_lo = n_history.front().first;
    const double cover_hi = n_history.back().first;
    if (std::isfinite(tmin_T) && (tmin_T < cover_lo - 1e-12 || t > cover_hi + 1e-12))
        throw std::invalid_argument("eta_from_T: nutrient history does not cover [min T, t]");

    // n(x, s) linearly interpolated in time between snapshots
    auto n_at = [&](double s, Eigen::Index cell) {
        if (s <= n_history.front().first) return n_history.front().second.values[cell];
        for (size_t k = 1; k < n_history.size(); ++k) {
            if (s <= n_history[k].first) {
                const double t0 = n_history[k - 1].first, t1 = n_history[k].first;
                const double f = (s - t0) / (t1 - t0);
                return (1 - f) * n_history[k - 1].second.values[cell] +
                       f * n_history[k].second.values[cell];
            }
        }
        return n_history.back().second.values[cell];
    };

    Field eta(T.grid);
    for (Eigen::Index c = 0; c < eta.values.size(); ++c) {
        const double tc = T.T[c];
        if (!(tc < t)) continue;
        // trapezoid over snapshot times clipped to [T(x), t]
        double acc = 0.0;
        double prev_s = tc, prev_n = n_at(tc, c);
        for (const auto& [ts, nf] : n_history) {
            (void)nf;
            if (ts <= tc) continue;
            const double s = std::min(ts, t);
            acc += 0.5 * (s - prev_s) * (prev_n + n_at(s, c));
            prev_s = s;
            prev_n = n_at(s, c);
            if (ts >= t) break;
        }
        if (prev_s < t) acc += 0.5 * (t - prev_s) * (prev_n + n_at(t, c));
        eta.values[c] = acc;
    }
    return eta;
}

HolderFit holder_exponent(const HittingField& T, const Eigen::Vector2d& x1,
                          const std::vector<double>& radii) {
    const Grid& g = T.grid;
    const double h = g.h();
    // nearest cell to x1
    Eigen::Index c1 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < T.T.size(); ++k) {
        const double d = (g.center(k) - x1).norm();
        if (d < best) { best = d; c1 = k; }
    }
    const double t1 = T.T[c1];
    if (!std::isfinite(t1))
        throw std::invalid_argument("holder_exponent: x1 has no finite hitting time");
    for (double r : radii)
        if (r < 3 * h)
            throw std::invalid_argument("holder_exponent: radii must be >= 3h");

    HolderFit fit;
    const Eigen::Vector2d c1pos = g.center(c1);
    for (double R : radii) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < T.T.size(); ++k) {
            if ((g.center(k) - c1pos).norm() > R) continue;
            const double inc = t1 - T.T[k];
            if (std::isfinite(T.T[k]) && inc > s) s = inc;
        }
        fit.points.emplace_back(R, s);
    }
    std::vector<double> lx, ly;
    for (auto& [R, s] : fit.points)
        if (s > 0) { lx.push_back(std::log(R)); ly.push_back(std::log(s)); }
    if (lx.size() < 2)
        throw std::domain_error("holder_exponent: degenerate fit, S(R) vanishes");
    const double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k]; sy += ly[k]; sxx += lx[k] * lx[k]; sxy += lx[k] * ly[k];
    }
    fit.alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double b = (sy - fit.alpha * sx) / n;
    double ss = 0;
    for (size_t k = 0; k < lx.size(); ++k) {
        const double e = ly[k] - (fit.alpha * lx[k] + b);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

ReportEntry patch_agreement(const Field& w, const Field& rho, double threshold,
                            double w_min, double band_cells_per_boundary_cell) {
    if (w_min <= 0)
        w_min = 10.0 * std::numeric_limits<double>::epsilon() *
                std::max(w.values.maxCoeff(), 1e-300);
    Eigen::Array<bool, Eigen::Dynamic, 1> pos = w.values > w_min;
    Eigen::Array<bool, Eigen::Dynamic, 1> sat = rho.values > threshold;
    const Grid& g = w.grid;
    const int n = g.cells;
    long diff = 0, boundary = 0;
    const int rows = g.dim == 1 ? 1 : n;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < n; ++i) {
            const Eigen::Index k = g.idx(i, j);
            if (pos[k] != sat[k]) ++diff;
            if (pos[k]) {
                const bool edge = (i > 0 && !pos[k - 1]) || (i + 1 < n && !pos[k + 1]) ||
                                  (g.dim == 2 && ((j > 0 && !pos[k - n]) ||
                                                  (j + 1 < rows && !pos[k + n])));
                if (edge) ++boundary;
            }
        }
    const double bound = band_cells_per_boundary_cell * double(std::max(boundary, 1L));
    return {"patch_agreement", double(diff), bound, double(diff) <= bound,
            "|{rho > 1-2/gamma} sym-diff {w > w_min}| = O(perimeter) cells"};
}

}  // namespace heleshaw
