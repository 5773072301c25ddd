#pragma once

#include <utility>
#include <vector>

#include "heleshaw/linsolve.hpp"
#include "heleshaw/report.hpp"

namespace heleshaw {

enum class SplitOrder { DiffuseThenAbsorb, AbsorbThenDiffuse };

struct NutrientParams {
    double dt = 0.0;
    double theta = 0.5;  // 0 explicit, 1 implicit, 0.5 Crank-Nicolson
    SplitOrder split = SplitOrder::DiffuseThenAbsorb;
    double cg_tol = 1e-10;  // fixed far below the inequality tolerances
};

/// One operator-split step of dn/dt = Lap n - rho n.
///
/// Diffusion is a theta-scheme solved by CG; absorption is the cell-wise
/// factor (1 - (1-theta) dt rho) / (1 + theta dt rho), which is the plain
/// implicit factor 1/(1 + dt rho) at theta = 1 and second-order accurate at
/// theta = 1/2. It keeps n >= 0 whenever (1-theta) dt rho <= 1.
Field step_nutrient(const Field& n, const Field& rho, const NutrientParams& params);

/// Max over stored times of (e^{-t} n0_min - min n(t))_+ . Zero absorption
/// saturates the bound only when rho == 1 everywhere.
ReportEntry check_lower_bound(const std::vector<std::pair<double, Field>>& n_history,
                              double n0_min, double tol_lb = 1e-3);

}  // namespace heleshaw
