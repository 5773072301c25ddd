#pragma once

#include "heleshaw/barrier.hpp"
#include "heleshaw/config.hpp"
#include "heleshaw/hopflax.hpp"
#include "heleshaw/limit.hpp"
#include "heleshaw/obstacle.hpp"
#include "heleshaw/report.hpp"

namespace heleshaw {

/// A parsed experiment: grid, initial data descriptor, gamma ladder, horizon,
/// enabled checks and their knobs. Tolerances can be overridden per check
/// with `tol.<check> = <value>` keys.
struct ExperimentConfig {
    std::string name = "experiment";
    Grid grid;

    std::string init_kind = "disk";  // disk | two_disks | annulus | custom_csv
    std::string density_mode = "pressure_cap";  // or mollified_indicator
    Eigen::Vector2d center = {0, 0}, center2 = {0, 0};
    double radius = 0.2, radius2 = 0.0;
    double ring_inner = 0.0, ring_outer = 0.0;
    double p_cap = 0.2;
    double n0 = 1.0;
    std::string custom_csv;

    std::vector<double> gammas = {80.0};
    double tau = 0.1;
    int snapshots = 16;
    double theta = 0.5;
    SplitOrder split = SplitOrder::DiffuseThenAbsorb;
    FluxLimiter limiter = FluxLimiter::None;
    double cfl_safety = 0.9;

    std::vector<std::string> checks;
    std::uint64_t seed = 1;
    int hopflax_pairs = 2000;
    double hopflax_theta = 1.0;
    Eigen::Vector2d barrier_x0 = {0, 0};
    double barrier_r0 = 0.0;
    std::vector<double> holder_radii_h = {4, 8, 16, 32};  // in units of h
    int holder_points = 8;
    double holder_t_frac = 0.7;
    std::vector<double> blowup_radii_h = {16, 8, 4};

    Config raw;

    double tol(const std::string& check, double fallback) const {
        return raw.get_real("tol." + check, fallback);
    }
    bool enabled(const std::string& check) const {
        for (const auto& c : checks)
            if (c == check || c == "all") return true;
        return false;
    }
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_from_config(const Config& cfg);

/// Realizes the shared initial-data descriptor at one gamma. Density comes
/// from a smooth pressure cap, rho0 = p0^{1/gamma} (so u_+ vanishes at t = 0
/// when the cap obeys -Lap p0 < n0), or from a 3-cell mollified indicator.
SimState initial_state(const ExperimentConfig& cfg, double gamma);

struct ExperimentResult {
    VerificationReport report;
    std::vector<SimRun> runs;  // one per gamma, ascending
    std::vector<std::string> warnings;
};

/// simulate -> accumulate -> diagnostics for every enabled check; artifacts
/// are written under out_dir unless it is empty.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads,
                                const std::string& out_dir);

void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(const std::string& path);

/// Free-boundary cells of {w > w_min}: zero cells with a positive 4-neighbor.
std::vector<Eigen::Vector2d> boundary_points(const Field& w, double w_min);

}  // namespace heleshaw
