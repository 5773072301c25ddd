#include "heleshaw/limit.hpp"

#include <cmath>

#include "heleshaw/parallel.hpp"

namespace heleshaw {

std::vector<SimRun> run_sweep(const GammaSweep& sweep, const SimConfig& base,
                              const std::function<SimState(double)>& init_for_gamma,
                              int threads) {
    if (sweep.gammas.size() < 3)
        throw std::invalid_argument("run_sweep: need at least 3 gamma values");
    for (size_t k = 0; k < sweep.gammas.size(); ++k) {
        if (sweep.gammas[k] < 2)
            throw std::invalid_argument("run_sweep: gamma values must be >= 2");
        if (k && sweep.gammas[k] <= sweep.gammas[k - 1])
            throw std::invalid_argument("run_sweep: gamma values must be strictly increasing");
    }
    std::vector<SimRun> runs(sweep.gammas.size());
    std::vector<std::string> failures(sweep.gammas.size());
    parallel_for(long(sweep.gammas.size()), threads, [&](long i) {
        SimConfig cfg = base;
        cfg.horizon = sweep.tau;
        try {
            runs[size_t(i)] = simulate(init_for_gamma(sweep.gammas[size_t(i)]), cfg);
        } catch (const std::exception& e) {
            failures[size_t(i)] = e.what();
        }
    });
    for (size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw SolverError("run_sweep: gamma = " + std::to_string(sweep.gammas[i]) +
                              ": " + failures[i]);
    return runs;
}

AbMoment ab_moment(const SimRun& run, double b) {
    if (!(b > 0)) throw std::invalid_argument("ab_moment: b must be positive");
    if (run.u_samples.empty())
        throw std::invalid_argument("ab_moment: run has no u_+ samples");
    const double cell = run.grid.cell_volume();
    const double dt_mid = run.horizon / double(run.u_samples.size());
    double total = 0.0;
    for (const auto& sample : run.u_samples) {
        double slab = 0.0;
        for (double u : sample.positive) {
            const double x = b * u;
            if (x > 700.0)
                throw std::domain_error("ab_moment: b u_+ > 700, integrand overflows");
            slab += (x - 1.0) * std::exp(x) + 1.0;
        }
        total += slab * cell * dt_mid;
    }
    return {b, total};
}

double calibrate_b(const std::vector<const SimRun*>& runs) {
    if (runs.empty()) throw std::invalid_argument("calibrate_b: no runs");
    double u_max = 0.0;
    for (const SimRun* r : runs) u_max = std::max(u_max, r->diag.u_plus_max);
    double b = 1.0;
    for (int k = 0; k < 20; ++k) {
        if (b * u_max <= 700.0) return b;
        b *= 0.5;
    }
    return b;  // 2^-20 fallback
}

double l1_distance_final(const SimRun& a, const SimRun& b) {
    if (!a.grid.same_as(b.grid))
        throw std::invalid_argument("l1_distance_final: runs live on different grids");
    return (a.final_state.rho.values - b.final_state.rho.values).abs().sum() *
           a.grid.cell_volume();
}

}  // namespace heleshaw
