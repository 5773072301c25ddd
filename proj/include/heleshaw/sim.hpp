#pragma once

#include <functional>
#include <vector>

#include "heleshaw/baiocchi.hpp"

namespace heleshaw {

/// Stored state at an endpoint snapshot time, with the step that follows it
/// (p_next, dt_next) retained so forward time differences are available.
struct Snapshot {
    double t = 0.0;
    Field rho, p, n, w, eta;
    Field p_next;
    double dt_next = 0.0;
};

/// Positive part of u_gamma at an integration midpoint, stored sparsely
/// (the moment integrand vanishes where u_+ = 0).
struct UPlusSample {
    double t = 0.0;
    std::vector<double> positive;  // the u_+ > 0 values only
};

struct SimConfig {
    double horizon = 0.1;
    int snapshot_count = 16;     // endpoint targets at k horizon / count
    bool midpoint_samples = true;  // u_+ records at (k - 1/2) horizon / count
    double cfl_safety = 0.9;
    long max_steps = 200'000'000;
    PmeParams pme;
};

/// Scalar diagnostics accumulated at per-step resolution.
struct RunDiagnostics {
    double mass_drift_rel = 0.0;      // worst |d mass| / mass over flux sweeps
    double lb_violation = 0.0;        // worst (e^{-t} min n0 - min n(t))_+
    double maxn_drift = 0.0;          // worst per-step increase of max n
    double min_n = 0.0;               // over the whole run
    double sat_drop = 0.0;            // worst drop below 1 - 1/gamma once reached
    double rho_max = 0.0;
    double p_max = 0.0;
    double u_plus_max = 0.0;          // over stored samples
    int support_margin_cells = 1 << 30;  // min distance of supp rho to the box edge
    long steps = 0;
};

struct SimRun {
    Grid grid;
    double gamma = 0.0;
    double horizon = 0.0;
    double n0_min = 0.0;
    std::vector<Snapshot> snaps;      // k = 0..snapshot_count, t = k horizon / count
    std::vector<UPlusSample> u_samples;
    RunDiagnostics diag;
    SimState final_state;

    std::vector<WSnapshot> w_history() const {
        std::vector<WSnapshot> out;
        out.reserve(snaps.size());
        for (const auto& s : snaps) out.push_back({s.t, s.w});
        return out;
    }
    std::vector<std::pair<double, Field>> n_history() const {
        std::vector<std::pair<double, Field>> out;
        out.reserve(snaps.size());
        for (const auto& s : snaps) out.emplace_back(s.t, s.n);
        return out;
    }
};

/// Advances the coupled density/pressure/nutrient system from `init` to the
/// horizon. dt follows the degenerate CFL bound each step (with the heat-CFL
/// accuracy cap h^2/(2 dim)) and is clipped so snapshot targets are hit
/// exactly; the Baiocchi transform accumulates every step.
SimRun simulate(const SimState& init, const SimConfig& cfg,
                const std::function<void(long, const SimState&)>& step_hook = {});

}  // namespace heleshaw
