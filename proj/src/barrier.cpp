#include "heleshaw/barrier.hpp"

#include <cmath>

namespace heleshaw {

ExponentConstants exponent_constants(int d) {
    if (d == 2) {
        const double e = std::exp(1.0);
        return {e, 2.0 / e, std::sqrt(e)};
    }
    if (d == 3) {
        const double xi = std::pow(1.5, 3.0);
        return {xi, 2.0 * std::pow(2.0 / 3.0, 3.0), 1.5};
    }
    throw std::invalid_argument("exponent_constants: unsupported dimension");
}

namespace {

double h_of(const BarrierConfig& c, const FundamentalSolution& G, double m,
            double t, double r) {
    const double num =
        c.pbar(t, m * r) + c.nbar0 * (m * m - 1.0) * r * r / (2.0 * G.d);
    return num / (G.value(m * r) - G.value(r));
}

}  // namespace

PsiProfile psi_profile(const BarrierConfig& config, int d, double t, double r_of_t) {
    if (!(r_of_t > 0)) throw std::domain_error("psi_profile: inner radius must be positive");
    const double m = config.m > 0 ? config.m : exponent_constants(d).m_star;
    if (!(m > 1)) throw std::domain_error("psi_profile: annulus ratio must exceed 1");
    const FundamentalSolution G(d);
    PsiProfile psi;
    psi.d = d;
    psi.nbar0 = config.nbar0;
    psi.r = r_of_t;
    psi.m = m;
    psi.h = h_of(config, G, m, t, r_of_t);
    psi.g = config.nbar0 / (2.0 * d) * r_of_t * r_of_t - psi.h * G.value(r_of_t);
    return psi;
}

RadiusTrajectory integrate_radius(const BarrierConfig& config, int d, double t_end,
                                  double dt, double r_floor) {
    if (!(config.r0 > 0)) throw std::invalid_argument("integrate_radius: r0 must be positive");
    if (!(dt > 0)) throw std::invalid_argument("integrate_radius: dt must be positive");
    const double m = config.m > 0 ? config.m : exponent_constants(d).m_star;
    const FundamentalSolution G(d);
    auto rhs = [&](double t, double r) {
        if (!(r > 0)) throw StabilityError("integrate_radius: stage drove r <= 0");
        const double h = h_of(config, G, m, t, r);
        return -std::abs(h) * G.deriv(r) - config.nbar0 / d * r;
    };

    RadiusTrajectory traj;
    double t = 0.0, r = config.r0;
    auto push = [&](double tt, double rr) {
        traj.t.push_back(tt);
        traj.r.push_back(rr);
        traj.h_of_t.push_back(h_of(config, G, m, tt, rr));
        traj.pbar.push_back(config.pbar(tt, m * rr));
    };
    push(t, r);
    while (t < t_end - 1e-14) {
        const double step = std::min(dt, t_end - t);
        const double k1 = rhs(t, r);
        const double k2 = rhs(t + 0.5 * step, r + 0.5 * step * k1);
        const double k3 = rhs(t + 0.5 * step, r + 0.5 * step * k2);
        const double k4 = rhs(t + step, r + step * k3);
        r += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += step;
        if (!(r > 0)) throw StabilityError("integrate_radius: r became nonpositive");
        push(t, r);
        if (r <= r_floor) {
            traj.truncated = true;
            break;
        }
    }
    return traj;
}

ComparisonResult verify_comparison(const SimRun& run, BarrierConfig config) {
    const Grid& g = run.grid;
    const double h = g.h();
    const int d = g.dim;
    const double m = config.m > 0 ? config.m : exponent_constants(d).m_star;
    config.m = m;

    // hypothesis: the saturated patch avoids B_{r0}(x0) at the starting time
    const double sat = 1.0 - 2.0 / run.gamma;
    const Field& rho0 = run.snaps.front().rho;
    for (Eigen::Index k = 0; k < rho0.values.size(); ++k) {
        if (rho0.values[k] > sat && (g.center(k) - config.x0).norm() < config.r0)
            throw std::invalid_argument(
                "verify_comparison: patch intersects B_{r0}(x0) at the start");
    }

    // ball sup of p from the snapshots, linear in time, radial ladder in space
    auto pbar = [&](double t, double radius) {
        t = std::min(std::max(t, run.snaps.front().t), run.snaps.back().t);
        size_t k1 = 1;
        while (k1 + 1 < run.snaps.size() && run.snaps[k1].t < t) ++k1;
        const auto& a = run.snaps[k1 - 1];
        const auto& b = run.snaps[k1];
        const double f = (t - a.t) / std::max(b.t - a.t, 1e-300);
        auto ball_sup = [&](const Field& p) {
            double s = interpolate(p, Eigen::Vector2d(config.x0));
            const int rungs = std::max(2, int(std::ceil(radius / (0.5 * h))));
            for (int j = 1; j <= rungs; ++j) {
                const double rj = radius * double(j) / double(rungs);
                const int angles =
                    g.dim == 1 ? 8 : std::max(16, int(2.0 * M_PI * rj / h) * 2);
                for (double v : radial_sample(p, Eigen::Vector2d(config.x0), rj, angles))
                    s = std::max(s, v);
            }
            return s;
        };
        return (1.0 - f) * ball_sup(a.p) + f * ball_sup(b.p);
    };
    config.pbar = pbar;

    const double span = run.snaps.back().t - run.snaps.front().t;
    const double dt_ode = span / (20.0 * double(run.snaps.size()));
    RadiusTrajectory traj = integrate_radius(config, d, span, dt_ode, 4.0 * h);

    ComparisonResult out;
    out.p_max = run.diag.p_max;
    for (const auto& snap : run.snaps) {
        const double t = snap.t - run.snaps.front().t;
        if (t > traj.t.back()) break;
        // radius at t from the trajectory
        size_t k1 = 1;
        while (k1 + 1 < traj.t.size() && traj.t[k1] < t) ++k1;
        const double f =
            (t - traj.t[k1 - 1]) / std::max(traj.t[k1] - traj.t[k1 - 1], 1e-300);
        const double r = (1.0 - f) * traj.r[k1 - 1] + f * traj.r[k1];
        if (r <= 4.0 * h) break;
        PsiProfile psi = psi_profile(config, d, t, r);
        for (Eigen::Index k = 0; k < snap.p.values.size(); ++k) {
            const double s = (g.center(k) - config.x0).norm();
            if (s < r || s > m * r) continue;
            out.max_violation =
                std::max(out.max_violation, snap.p.values[k] - psi(s));
        }
    }
    out.trajectory = std::move(traj);
    return out;
}

}  // namespace heleshaw
