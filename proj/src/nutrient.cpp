#include "heleshaw/nutrient.hpp"

#include <cmath>

namespace heleshaw {

namespace {

void absorb(Field& n, const Field& rho, double dt, double theta) {
    // theta-weighted rational factor for n' = -rho n
    n.values *= (1.0 - (1.0 - theta) * dt * rho.values) /
                (1.0 + theta * dt * rho.values);
}

void diffuse(Field& n, const NutrientParams& p) {
    const double h = n.grid.h();
    if (p.theta < 0.5) {
        const double cfl = h * h / (2.0 * n.grid.dim);
        if (p.dt > cfl)
            throw StabilityError("step_nutrient: explicit step needs dt <= h^2/(2 dim)");
    }
    Field lap = laplacian(n);
    if (p.theta == 0.0) {
        n.values += p.dt * lap.values;
        return;
    }
    Field rhs(n.grid);
    rhs.values = n.values + (1.0 - p.theta) * p.dt * lap.values;
    n = solve_helmholtz_neumann(rhs, p.theta * p.dt, p.cg_tol, &n);
}

}  // namespace

Field step_nutrient(const Field& n, const Field& rho, const NutrientParams& params) {
    if (!(params.dt > 0)) throw std::invalid_argument("step_nutrient: dt must be positive");
    if (!n.grid.same_as(rho.grid))
        throw std::invalid_argument("step_nutrient: n and rho live on different grids");
    Field out = n;
    if (params.split == SplitOrder::DiffuseThenAbsorb) {
        diffuse(out, params);
        absorb(out, rho, params.dt, params.theta);
    } else {
        absorb(out, rho, params.dt, params.theta);
        diffuse(out, params);
    }
    if (!out.all_finite()) throw SolverError("step_nutrient: non-finite values");
    return out;
}

ReportEntry check_lower_bound(const std::vector<std::pair<double, Field>>& n_history,
                              double n0_min, double tol_lb) {
    double worst = 0.0;
    for (const auto& [t, n] : n_history) {
        const double bound = std::exp(-t) * n0_min;
        const double violation = bound - n.values.minCoeff();
        if (violation > worst) worst = violation;
    }
    return {"nutrient_lower_bound", worst, tol_lb, worst <= tol_lb,
            "min n(t) >= e^{-t} min n(0)"};
}

}  // namespace heleshaw
