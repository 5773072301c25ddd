#pragma once

#include "heleshaw/nutrient.hpp"

namespace heleshaw {

enum class FluxLimiter { None, Minmod };

struct PmeParams {
    double gamma = 2.0;  // pressure exponent, p = rho^gamma
    double dt = 0.0;
    FluxLimiter limiter = FluxLimiter::None;
    NutrientParams nutrient;
};

/// Lattice snapshot of the relaxed system at one time stamp. p == rho^gamma
/// cell-wise after every public operation.
struct SimState {
    double time = 0.0;
    double gamma = 2.0;
    Field rho, p, n;
};

/// rho^gamma with an exponentiation-by-squaring fast path for integer gamma.
Eigen::ArrayXd pow_gamma(const Eigen::ArrayXd& rho, double gamma);

/// Largest stable step for the incoming state: h^2 / (2 dim max(gamma p) + eps).
double cfl_dt(const SimState& state);

/// One step of d rho/dt = div(rho grad p) + rho n:
/// conservative upwinded face fluxes, then exact exponential growth
/// rho <- rho e^{dt n}, then p = rho^gamma; the nutrient advances by the
/// same dt. Throws StabilityError when dt exceeds the degenerate CFL bound.
SimState step_density(const SimState& state, const PmeParams& params);

/// u_gamma = -gamma (Lap p + n).
Field compute_u_gamma(const SimState& state);

/// Solves -Lap q = n on the saturated set {rho > threshold} with q = 0
/// outside, and reports ||p - q||_inf / ||q||_inf over that set.
/// Throws std::invalid_argument when the saturated set is empty.
ReportEntry pressure_consistency(const SimState& state, double threshold);

/// Mass diagnostics for one step: flux sweep drift and the growth identity.
struct MassBalance {
    double before = 0.0;       // integral of rho before the step
    double after_flux = 0.0;   // after the conservative sweep (== before up to fp)
    double after = 0.0;        // after growth
    double growth_exact = 0.0; // integral of rho_flux (e^{dt n} - 1)
};
SimState step_density(const SimState& state, const PmeParams& params, MassBalance* mb);

}  // namespace heleshaw
