#pragma once

#include <functional>

#include "heleshaw/sim.hpp"

namespace heleshaw {

/// Annulus-optimization constant xi_d = (d/2)^{d/(d-2)}, the Holder exponent
/// alpha_d = 2/xi_d, and the optimal annulus ratio m* = (d/2)^{1/(d-2)};
/// d = 2 takes the limiting values (e, 2/e, sqrt e). Dims other than 2, 3 are
/// unsupported.
struct ExponentConstants {
    double xi = 0.0;
    double alpha = 0.0;
    double m_star = 0.0;
};
ExponentConstants exponent_constants(int d);

/// Radial fundamental solution with Gamma'(r) = r^{1-d}:
/// Gamma_2 = log r, Gamma_3 = -1/r.
struct FundamentalSolution {
    int d = 2;
    explicit FundamentalSolution(int dim) : d(dim) {
        if (d != 2 && d != 3)
            throw std::invalid_argument("fundamental solution: unsupported dimension");
    }
    double value(double r) const { return d == 2 ? std::log(r) : -1.0 / r; }
    double deriv(double r) const { return d == 2 ? 1.0 / r : 1.0 / (r * r); }
};

struct BarrierConfig {
    Eigen::Vector2d x0 = {0, 0};  // tracked exterior point
    double r0 = 0.0;              // initial inner radius
    double m = 0.0;               // annulus ratio; <= 0 selects m*(d)
    double nbar0 = 0.0;           // nutrient bound driving -Lap psi = nbar0
    std::function<double(double, double)> pbar;  // (t, radius) -> ball sup of p
};

/// The radial profile on the annulus r <= s <= m r:
/// psi(s) = h Gamma_d(s) - (nbar0 / 2d) s^2 + g, with h making the outer value
/// p̄ and g making the inner value zero; -Lap psi = nbar0 in between.
struct PsiProfile {
    int d = 2;
    double h = 0.0, g = 0.0, nbar0 = 0.0, r = 0.0, m = 0.0;
    double operator()(double s) const {
        const FundamentalSolution G(d);
        return h * G.value(s) - nbar0 / (2.0 * d) * s * s + g;
    }
};
PsiProfile psi_profile(const BarrierConfig& config, int d, double t, double r_of_t);

struct RadiusTrajectory {
    std::vector<double> t, r, h_of_t, pbar;
    bool truncated = false;  // stopped early at the resolution floor
};

/// RK4 on r' = -|h(t)| |Gamma_d'(r)| - (nbar0/d) r, stopping early when r
/// falls to r_floor. Throws StabilityError if a stage drives r <= 0.
RadiusTrajectory integrate_radius(const BarrierConfig& config, int d, double t_end,
                                  double dt, double r_floor = 0.0);

struct ComparisonResult {
    double max_violation = 0.0;  // max of p - psi over the tracked annulus
    double p_max = 0.0;
    RadiusTrajectory trajectory;
};

/// Checks p(t0 + t, x) <= psi(t, x) on the annulus at every stored snapshot
/// until the radius hits the resolution floor (4h). The run's patch must
/// avoid B_{r0}(x0) at the starting time; otherwise std::invalid_argument.
ComparisonResult verify_comparison(const SimRun& run, BarrierConfig config);

}  // namespace heleshaw
