#include "heleshaw/hopflax.hpp"

#include <cmath>

#include "heleshaw/parallel.hpp"

namespace heleshaw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// deterministic uniform draws from a per-pair stream
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next_u64() { return s = splitmix64(s); }
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }
    long next_below(long n) { return long(next_u64() % std::uint64_t(n)); }
};

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double lambda_schedule(double theta, double s) {
    if (!(s > 0)) throw std::domain_error("lambda_schedule: s must be positive");
    if (theta < 0) throw std::invalid_argument("lambda_schedule: theta must be >= 0");
    return theta + 1.0 / std::sqrt(s);
}

double big_lambda(const HopfLaxParams& params, double t) {
    if (!(t > 0)) throw std::domain_error("big_lambda: t must be positive");
    return 5.0 / (4.0 * params.b) * (params.theta * t + 2.0 * std::sqrt(t)) +
           t / params.b * std::log1p(params.C / t);
}

double integral_exp_lambda(const HopfLaxParams& params, double T) {
    if (!(T > 0)) throw std::domain_error("integral_exp_lambda: T must be positive");
    auto f = [&](double s) { return s > 0 ? std::exp(big_lambda(params, s)) : 1.0; };
    return adaptive_simpson(f, 0.0, T, 1e-8 * std::max(1.0, T));
}

HopfLaxResult verify_hopf_lax(const SimRun& run, const HopfLaxParams& params,
                              std::uint64_t seed, int threads) {
    if (run.snaps.size() < 2)
        throw std::invalid_argument("verify_hopf_lax: need at least two snapshots");
    const long n_cells = long(run.grid.size());
    const long n_snaps = long(run.snaps.size());

    // distinct time gaps are few; cache the quadrature per gap
    std::vector<double> gap(n_snaps * n_snaps, -1.0), lam(n_snaps * n_snaps, 0.0);
    for (long i0 = 0; i0 < n_snaps; ++i0)
        for (long i1 = i0 + 1; i1 < n_snaps; ++i1) {
            const double dt = run.snaps[size_t(i1)].t - run.snaps[size_t(i0)].t;
            if (dt <= 0) continue;
            gap[i0 * n_snaps + i1] = integral_exp_lambda(params, dt);
            lam[i0 * n_snaps + i1] = big_lambda(params, dt);
        }

    HopfLaxResult res;
    res.pairs.resize(size_t(params.pair_count));
    parallel_for(params.pair_count, threads, [&](long k) {
        Rng rng(splitmix64(seed ^ std::uint64_t(k)));
        long i0 = rng.next_below(n_snaps);
        long i1 = rng.next_below(n_snaps);
        if (i0 == i1) i1 = (i1 + 1) % n_snaps;
        if (i0 > i1) std::swap(i0, i1);
        const long c0 = rng.next_below(n_cells);
        const long c1 = rng.next_below(n_cells);
        const auto& s0 = run.snaps[size_t(i0)];
        const auto& s1 = run.snaps[size_t(i1)];
        const double dt = s1.t - s0.t;
        const double dist = (run.grid.center(c1) - run.grid.center(c0)).norm();
        const double lhs = s0.p.values[c0];
        const double cost = dist * dist / (4.0 * gap[i0 * n_snaps + i1]);
        const double err =
            params.C * std::pow(dt, 0.7) * std::exp(-lambda_schedule(params.theta, dt));
        const double rhs =
            std::exp(lam[i0 * n_snaps + i1]) * (s1.p.values[c1] + cost + err);
        HopfLaxPair& pr = res.pairs[size_t(k)];
        pr = {s0.t, s1.t, dist, lhs, rhs, (lhs - rhs) / rhs};
    });

    long violated = 0;
    for (const auto& pr : res.pairs) {
        res.max_violation = std::max(res.max_violation, pr.violation);
        if (pr.violation > res.rel_tol) ++violated;
    }
    res.violated_fraction = double(violated) / double(params.pair_count);
    return res;
}

std::pair<double, HopfLaxResult> scan_envelope_constant(const SimRun& run,
                                                        HopfLaxParams params,
                                                        std::uint64_t seed, int threads) {
    HopfLaxResult last;
    for (double C = 1.0; C <= 1024.0; C *= 2.0) {
        params.C = C;
        last = verify_hopf_lax(run, params, seed, threads);
        if (last.violated_fraction <= 0.01) return {C, last};
    }
    return {1024.0, last};
}

double hjb_residual(const SimRun& run) {
    const Grid& g = run.grid;
    const double tau = run.horizon;
    auto bump = [](double s) {  // smooth, supported on (0.1, 0.9)
        if (s <= 0.1 || s >= 0.9) return 0.0;
        const double u = (s - 0.1) / 0.8;
        const double c = std::cos(M_PI * (u - 0.5));
        return c * c;
    };
    double num = 0.0, den = 0.0;
    Field gsq(g), lap(g);
    for (const auto& snap : run.snaps) {
        if (snap.dt_next <= 0) continue;
        const double wt = bump(snap.t / tau);
        if (wt == 0.0) continue;
        grad_sq_into(snap.p, gsq);
        laplacian_into(snap.p, lap);
        for (Eigen::Index k = 0; k < g.size(); ++k) {
            const double u_plus =
                std::max(0.0, -run.gamma * (lap.values[k] + snap.n.values[k]));
            const double r = (snap.p_next.values[k] - snap.p.values[k]) / snap.dt_next -
                             gsq.values[k] + u_plus * snap.p.values[k];
            const auto pos = g.center(k);
            double wx = bump((pos[0] - g.origin[0]) / g.extent);
            if (g.dim == 2) wx *= bump((pos[1] - g.origin[1]) / g.extent);
            num += wt * wx * std::max(0.0, -r);
            den += wt * wx;
        }
    }
    return den > 0 ? num / den : 0.0;
}

}  // namespace heleshaw
