#include "heleshaw/sim.hpp"

#include <algorithm>
#include <cmath>

namespace heleshaw {

namespace {

int support_margin_cells(const Field& rho) {
    const Grid& g = rho.grid;
    const int n = g.cells;
    int margin = n;
    const int rows = g.dim == 1 ? 1 : n;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < n; ++i) {
            if (rho.values[g.idx(i, j)] <= 1e-10) continue;
            int d = std::min(i, n - 1 - i);
            if (g.dim == 2) d = std::min(d, std::min(j, rows - 1 - j));
            margin = std::min(margin, d);
        }
    return margin;
}

void record_u_plus(const SimState& s, std::vector<UPlusSample>& out, double& upmax) {
    Field u = compute_u_gamma(s);
    UPlusSample sample;
    sample.t = s.time;
    for (Eigen::Index k = 0; k < u.values.size(); ++k)
        if (u.values[k] > 0) {
            sample.positive.push_back(u.values[k]);
            upmax = std::max(upmax, u.values[k]);
        }
    out.push_back(std::move(sample));
}

}  // namespace

SimRun simulate(const SimState& init, const SimConfig& cfg,
                const std::function<void(long, const SimState&)>& step_hook) {
    if (!(cfg.horizon > 0)) throw std::invalid_argument("simulate: horizon must be positive");
    if (cfg.snapshot_count < 1)
        throw std::invalid_argument("simulate: need at least one snapshot");

    SimRun run;
    run.grid = init.rho.grid;
    run.gamma = init.gamma;
    run.horizon = cfg.horizon;
    run.n0_min = init.n.values.minCoeff();

    const Grid& g = run.grid;
    const double h = g.h();
    const double dt_cap = h * h / (2.0 * g.dim);
    const double gamma = init.gamma;

    // event times: endpoints k D, midpoints (k - 1/2) D
    const double D = cfg.horizon / cfg.snapshot_count;
    struct Event {
        double t;
        bool midpoint;
    };
    std::vector<Event> events;
    for (int k = 1; k <= cfg.snapshot_count; ++k) {
        if (cfg.midpoint_samples) events.push_back({(k - 0.5) * D, true});
        events.push_back({std::min(double(k) * D, cfg.horizon), false});
    }

    SimState state = init;
    BaiocchiAccumulator bai(g);
    bai.start(state);

    auto snapshot_of = [&](const SimState& s) {
        Snapshot snap;
        snap.t = s.time;
        snap.rho = s.rho;
        snap.p = s.p;
        snap.n = s.n;
        snap.w = bai.w();
        snap.eta = bai.eta();
        return snap;
    };
    run.snaps.push_back(snapshot_of(state));
    if (cfg.midpoint_samples) record_u_plus(state, run.u_samples, run.diag.u_plus_max);

    Eigen::Array<bool, Eigen::Dynamic, 1> ever_sat =
        Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(g.size(), false);
    const double sat_level = 1.0 - 1.0 / gamma;
    double prev_max_n = state.n.values.maxCoeff();
    run.diag.min_n = state.n.values.minCoeff();
    run.diag.support_margin_cells = support_margin_cells(state.rho);
    bool pending_p_next = false;

    size_t next_event = 0;
    PmeParams params = cfg.pme;
    params.gamma = gamma;
    while (state.time < cfg.horizon - 1e-14) {
        double dt = std::min(cfg.cfl_safety * cfl_dt(state), dt_cap);
        bool at_event = false;
        if (next_event < events.size() &&
            state.time + dt >= events[next_event].t - 1e-14) {
            dt = std::max(events[next_event].t - state.time, 1e-300);
            at_event = true;
        }
        params.dt = dt;
        MassBalance mb;
        state = step_density(state, params, &mb);
        bai.add(state);
        ++run.diag.steps;
        if (run.diag.steps > cfg.max_steps)
            throw SolverError("simulate: step cap exceeded");

        if (pending_p_next) {
            run.snaps.back().p_next = state.p;
            run.snaps.back().dt_next = dt;
            pending_p_next = false;
        }

        const double mass = std::max(mb.before, 1e-300);
        run.diag.mass_drift_rel =
            std::max(run.diag.mass_drift_rel, std::abs(mb.after_flux - mb.before) / mass);

        const double min_n = state.n.values.minCoeff();
        const double max_n = state.n.values.maxCoeff();
        run.diag.min_n = std::min(run.diag.min_n, min_n);
        run.diag.lb_violation = std::max(
            run.diag.lb_violation, std::exp(-state.time) * run.n0_min - min_n);
        run.diag.maxn_drift = std::max(run.diag.maxn_drift, max_n - prev_max_n);
        prev_max_n = max_n;

        for (Eigen::Index k = 0; k < state.rho.values.size(); ++k) {
            if (ever_sat[k])
                run.diag.sat_drop =
                    std::max(run.diag.sat_drop, sat_level - state.rho.values[k]);
            else if (state.rho.values[k] >= sat_level)
                ever_sat[k] = true;
        }
        run.diag.rho_max = std::max(run.diag.rho_max, state.rho.values.maxCoeff());
        run.diag.p_max = std::max(run.diag.p_max, state.p.values.maxCoeff());

        if (step_hook) step_hook(run.diag.steps, state);

        if (at_event) {
            if (events[next_event].midpoint) {
                record_u_plus(state, run.u_samples, run.diag.u_plus_max);
            } else {
                run.snaps.push_back(snapshot_of(state));
                pending_p_next = true;
                run.diag.support_margin_cells = std::min(
                    run.diag.support_margin_cells, support_margin_cells(state.rho));
            }
            ++next_event;
        }
    }
    // final snapshot has no recorded follower; drop its p_next by leaving dt 0
    run.final_state = state;
    return run;
}

}  // namespace heleshaw
