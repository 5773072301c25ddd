#include "heleshaw/pme.hpp"

#include <cmath>

namespace heleshaw {

namespace {

inline double minmod(double a, double b) {
    if (a > 0 && b > 0) return a < b ? a : b;
    if (a < 0 && b < 0) return a > b ? a : b;
    return 0.0;
}

// e^x, series branch below 1e-4 where it equals exp to double precision
inline double exp_accurate(double x) {
    if (x > -1e-4 && x < 1e-4)
        return 1.0 + x * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0)));
    return std::exp(x);
}

// face value of rho, upwinded by the pressure drop; optional minmod slope
inline double face_density(const double* rho, int lo, int hi, int behind_lo,
                           int ahead_hi, double p_lo, double p_hi,
                           FluxLimiter lim) {
    if (p_lo >= p_hi) {  // flow lo -> hi
        if (lim == FluxLimiter::None) return rho[lo];
        return rho[lo] + 0.5 * minmod(rho[lo] - rho[behind_lo], rho[hi] - rho[lo]);
    }
    if (lim == FluxLimiter::None) return rho[hi];
    return rho[hi] + 0.5 * minmod(rho[hi] - rho[ahead_hi], rho[lo] - rho[hi]);
}

}  // namespace

Eigen::ArrayXd pow_gamma(const Eigen::ArrayXd& rho, double gamma) {
    const long gi = std::lround(gamma);
    if (std::abs(gamma - double(gi)) < 1e-14 && gi >= 1) {
        Eigen::ArrayXd result = Eigen::ArrayXd::Ones(rho.size());
        Eigen::ArrayXd base = rho;
        long e = gi;
        while (e > 0) {
            if (e & 1) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }
    return rho.pow(gamma);
}

double cfl_dt(const SimState& state) {
    const double h = state.rho.grid.h();
    const double diff = state.gamma * state.p.values.maxCoeff();
    return h * h / (2.0 * state.rho.grid.dim * diff + 1e-12);
}

SimState step_density(const SimState& state, const PmeParams& params, MassBalance* mb) {
    const Grid& g = state.rho.grid;
    const int n = g.cells;
    const double h = g.h();
    const double dt = params.dt;
    if (!(dt > 0)) throw std::invalid_argument("step_density: dt must be positive");
    if (dt > cfl_dt(state) * (1.0 + 1e-12))
        throw StabilityError("step_density: dt violates the degenerate-diffusion CFL bound");

    SimState out;
    out.time = state.time + dt;
    out.gamma = state.gamma;
    out.rho = state.rho;
    const double* p = state.p.values.data();
    const double* r = state.rho.values.data();
    double* rn = out.rho.values.data();
    const double c = dt / (h * h);

    if (g.dim == 1) {
        for (int i = 0; i + 1 < n; ++i) {
            const int bl = i > 0 ? i - 1 : i;
            const int ah = i + 2 < n ? i + 2 : i + 1;
            const double rf = face_density(r, i, i + 1, bl, ah, p[i], p[i + 1],
                                           params.limiter);
            const double flux = rf * (p[i + 1] - p[i]);  // times dt/h^2 below
            rn[i] += c * flux;
            rn[i + 1] -= c * flux;
        }
    } else {
        for (int j = 0; j < n; ++j) {
            const Eigen::Index row = g.idx(0, j);
            const double* pr = p + row;
            const double* rr = r + row;
            double* nr = rn + row;
            for (int i = 0; i + 1 < n; ++i) {
                const int bl = i > 0 ? i - 1 : i;
                const int ah = i + 2 < n ? i + 2 : i + 1;
                const double rf = face_density(rr, i, i + 1, bl, ah, pr[i],
                                               pr[i + 1], params.limiter);
                const double flux = rf * (pr[i + 1] - pr[i]);
                nr[i] += c * flux;
                nr[i + 1] -= c * flux;
            }
        }
        for (int j = 0; j + 1 < n; ++j) {
            const Eigen::Index lo = g.idx(0, j), hi = g.idx(0, j + 1);
            const Eigen::Index bl = j > 0 ? g.idx(0, j - 1) : lo;
            const Eigen::Index ah = j + 2 < n ? g.idx(0, j + 2) : hi;
            for (int i = 0; i < n; ++i) {
                const double rf =
                    face_density(r, int(lo + i), int(hi + i), int(bl + i),
                                 int(ah + i), p[lo + i], p[hi + i], params.limiter);
                const double flux = rf * (p[hi + i] - p[lo + i]);
                rn[lo + i] += c * flux;
                rn[hi + i] -= c * flux;
            }
        }
    }

    const double rho_min = out.rho.values.minCoeff();
    if (rho_min < -1e-12)
        throw SolverError("step_density: negative density after flux sweep");
    if (rho_min < 0) out.rho.values = out.rho.values.max(0.0);

    if (mb) {
        mb->before = integral(state.rho);
        mb->after_flux = integral(out.rho);
    }

    // growth, integrated exactly per step
    const double* nv = state.n.values.data();
    double growth_sum = 0.0;
    for (Eigen::Index k = 0; k < out.rho.values.size(); ++k) {
        const double e = exp_accurate(dt * nv[k]);
        if (mb) growth_sum += rn[k] * (e - 1.0);
        rn[k] *= e;
    }
    if (mb) {
        mb->growth_exact = growth_sum * g.cell_volume();
        mb->after = integral(out.rho);
    }

    out.p = Field(g);
    out.p.values = pow_gamma(out.rho.values, out.gamma);

    NutrientParams np = params.nutrient;
    np.dt = dt;
    out.n = step_nutrient(state.n, state.rho, np);

    if (!out.rho.all_finite() || !out.p.all_finite())
        throw SolverError("step_density: non-finite values");
    return out;
}

SimState step_density(const SimState& state, const PmeParams& params) {
    return step_density(state, params, nullptr);
}

Field compute_u_gamma(const SimState& state) {
    Field u = laplacian(state.p);
    u.values = -state.gamma * (u.values + state.n.values);
    return u;
}

ReportEntry pressure_consistency(const SimState& state, double threshold) {
    if (!(threshold > 0 && threshold < 1))
        throw std::invalid_argument("pressure_consistency: threshold must lie in (0,1)");
    Eigen::Array<bool, Eigen::Dynamic, 1> mask = state.rho.values > threshold;
    if (!mask.any())
        throw std::invalid_argument("pressure_consistency: empty saturated set");
    Field q = solve_poisson_dirichlet_masked(state.n, mask);
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        num = std::max(num, std::abs(state.p.values[k] - q.values[k]));
        den = std::max(den, std::abs(q.values[k]));
    }
    const double rel = den > 0 ? num / den : num;
    return {"pressure_consistency", rel, 0.05, rel <= 0.05,
            "p solves -Lap p = n on the saturated set, p = 0 outside"};
}

}  // namespace heleshaw
