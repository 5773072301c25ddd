#include "heleshaw/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "heleshaw/parallel.hpp"

namespace heleshaw {

namespace {

double cap_bump(double s2_over_R2, double P) {
    const double w = 1.0 - s2_over_R2;
    return w > 0 ? P * w * w : 0.0;
}

Field pressure_cap(const ExperimentConfig& cfg) {
    const Grid& g = cfg.grid;
    Field p0(g);
    auto add = [&](const Eigen::Vector2d& c, double R) {
        for (Eigen::Index k = 0; k < p0.values.size(); ++k) {
            const double s2 = (g.center(k) - c).squaredNorm();
            p0.values[k] = std::max(p0.values[k], cap_bump(s2 / (R * R), cfg.p_cap));
        }
    };
    if (cfg.init_kind == "disk") {
        add(cfg.center, cfg.radius);
    } else if (cfg.init_kind == "two_disks") {
        add(cfg.center, cfg.radius);
        add(cfg.center2, cfg.radius2 > 0 ? cfg.radius2 : cfg.radius);
    } else if (cfg.init_kind == "annulus") {
        const double mid = 0.5 * (cfg.ring_inner + cfg.ring_outer);
        const double w = 0.5 * (cfg.ring_outer - cfg.ring_inner);
        for (Eigen::Index k = 0; k < p0.values.size(); ++k) {
            const double s = (g.center(k) - cfg.center).norm();
            const double u = (s - mid) / w;
            p0.values[k] = cap_bump(u * u, cfg.p_cap);
        }
    } else {
        throw ConfigError("init.kind: unknown kind `" + cfg.init_kind + "`");
    }
    return p0;
}

Field mollified_indicator(const ExperimentConfig& cfg) {
    const Grid& g = cfg.grid;
    const double w = 3.0 * g.h();
    Field rho0(g);
    auto level = [&](double s, double R) {
        const double u = (s - R) / w;  // ramp down over [R - w/2, R + w/2]
        if (u <= -0.5) return 1.0;
        if (u >= 0.5) return 0.0;
        const double c = std::cos(M_PI * (u + 0.5) * 0.5);
        return c * c;
    };
    for (Eigen::Index k = 0; k < rho0.values.size(); ++k) {
        double v = level((g.center(k) - cfg.center).norm(), cfg.radius);
        if (cfg.init_kind == "two_disks")
            v = std::max(v, level((g.center(k) - cfg.center2).norm(),
                                  cfg.radius2 > 0 ? cfg.radius2 : cfg.radius));
        rho0.values[k] = v;
    }
    return rho0;
}

std::string label_of(PointType t) {
    switch (t) {
        case PointType::Regular: return "regular";
        case PointType::Singular: return "singular";
        default: return "unresolved";
    }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    return experiment_from_config(Config::parse_file(path));
}

ExperimentConfig experiment_from_config(const Config& c) {
    ExperimentConfig e;
    e.raw = c;
    e.name = c.get_string("name", "experiment");
    const int dim = int(c.get_int("grid.dim", 2));
    const int cells = int(c.get_int("grid.cells", 128));
    const double extent = c.get_real("grid.extent", 1.0);
    auto org = c.get_reals("grid.origin", {0.0, 0.0});
    e.grid = Grid(dim, cells, extent, {org[0], org.size() > 1 ? org[1] : 0.0});

    e.init_kind = c.get_string("init.kind", "disk");
    e.density_mode = c.get_string("init.density_mode", "pressure_cap");
    if (e.density_mode != "pressure_cap" && e.density_mode != "mollified_indicator")
        throw ConfigError("init.density_mode: unknown mode `" + e.density_mode + "`");
    auto ctr = c.get_reals("init.center", {extent / 2, extent / 2});
    e.center = {org[0] + 0, 0};
    e.center = {ctr[0], ctr.size() > 1 ? ctr[1] : 0.0};
    auto ctr2 = c.get_reals("init.center2", {0.0, 0.0});
    e.center2 = {ctr2[0], ctr2.size() > 1 ? ctr2[1] : 0.0};
    e.radius = c.get_real("init.radius", 0.2);
    e.radius2 = c.get_real("init.radius2", 0.0);
    e.ring_inner = c.get_real("init.ring_inner", 0.0);
    e.ring_outer = c.get_real("init.ring_outer", 0.0);
    e.p_cap = c.get_real("init.pressure", 0.2);
    e.n0 = c.get_real("init.nutrient", 1.0);
    e.custom_csv = c.get_string("init.csv", "");

    e.gammas = c.get_reals("pme.gamma", {80.0});
    const std::string lim = c.get_string("pme.limiter", "none");
    if (lim == "minmod") e.limiter = FluxLimiter::Minmod;
    else if (lim != "none") throw ConfigError("pme.limiter: unknown limiter `" + lim + "`");
    e.theta = c.get_real("nutrient.theta", 0.5);
    const std::string split = c.get_string("nutrient.splitting", "diffuse_absorb");
    if (split == "absorb_diffuse") e.split = SplitOrder::AbsorbThenDiffuse;
    else if (split != "diffuse_absorb")
        throw ConfigError("nutrient.splitting: unknown order `" + split + "`");
    e.tau = c.get_real("time.horizon", 0.1);
    e.snapshots = int(c.get_int("time.snapshots", 16));
    e.cfl_safety = c.get_real("time.cfl_safety", 0.9);

    e.checks = c.get_list("checks");
    e.seed = std::uint64_t(c.get_int("seed", 1));
    e.hopflax_pairs = int(c.get_int("hopflax.pairs", 2000));
    e.hopflax_theta = c.get_real("hopflax.theta", 1.0);
    auto bx = c.get_reals("barrier.x0", {0.0, 0.0});
    e.barrier_x0 = {bx[0], bx.size() > 1 ? bx[1] : 0.0};
    e.barrier_r0 = c.get_real("barrier.r0", 0.0);
    e.holder_radii_h = c.get_reals("holder.radii_h", {4, 8, 16, 32});
    e.holder_points = int(c.get_int("holder.points", 8));
    e.holder_t_frac = c.get_real("holder.t_frac", 0.7);
    e.blowup_radii_h = c.get_reals("classify.radii_h", {16, 8, 4});
    return e;
}

SimState initial_state(const ExperimentConfig& cfg, double gamma) {
    SimState s;
    s.time = 0.0;
    s.gamma = gamma;
    s.n = Field(cfg.grid, cfg.n0);
    if (cfg.init_kind == "custom_csv") {
        if (cfg.custom_csv.empty()) throw ConfigError("init.csv: missing path");
        s.rho = read_field_csv(cfg.custom_csv);
        if (!s.rho.grid.same_as(cfg.grid))
            throw ConfigError("init.csv: field grid does not match grid.* keys");
        s.p = Field(cfg.grid);
        s.p.values = pow_gamma(s.rho.values, gamma);
        return s;
    }
    if (cfg.density_mode == "mollified_indicator") {
        s.rho = mollified_indicator(cfg);
        s.p = Field(cfg.grid);
        s.p.values = pow_gamma(s.rho.values, gamma);
        return s;
    }
    s.p = pressure_cap(cfg);
    s.rho = Field(cfg.grid);
    s.rho.values = s.p.values.pow(1.0 / gamma);
    return s;
}

void write_field_csv(const std::string& path, const Field& f) {
    CsvWriter w(path);
    w.row({"x", "y", "value"});
    const Grid& g = f.grid;
    for (Eigen::Index k = 0; k < f.values.size(); ++k) {
        const auto c = g.center(k);
        w.row({csv_real(c[0]), csv_real(c[1]), csv_real(f.values[k])});
    }
}

Field read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("field csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, ys, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = csv_split(line);
        if (cells.size() < 3) throw ConfigError("field csv: bad row in " + path);
        xs.push_back(std::stod(cells[0]));
        ys.push_back(std::stod(cells[1]));
        vs.push_back(std::stod(cells[2]));
    }
    if (xs.size() < 3) throw ConfigError("field csv: too few rows in " + path);
    bool one_d = true;
    for (double y : ys)
        if (y != ys[0]) { one_d = false; break; }
    const long total = long(xs.size());
    int cells_per_axis;
    if (one_d) {
        cells_per_axis = int(total);
    } else {
        cells_per_axis = int(std::lround(std::sqrt(double(total))));
        if (long(cells_per_axis) * cells_per_axis != total)
            throw ConfigError("field csv: cell count is not a square in " + path);
    }
    const double h = xs[1] - xs[0];
    Grid g(one_d ? 1 : 2, cells_per_axis, h * cells_per_axis,
           {xs[0] - 0.5 * h, one_d ? 0.0 : ys[0] - 0.5 * h});
    Field f(g);
    for (long k = 0; k < total; ++k) f.values[k] = vs[size_t(k)];
    return f;
}

std::vector<Eigen::Vector2d> boundary_points(const Field& w, double w_min) {
    if (w_min <= 0)
        w_min = 10.0 * std::numeric_limits<double>::epsilon() *
                std::max(w.values.maxCoeff(), 1e-300);
    const Grid& g = w.grid;
    const int n = g.cells;
    const int rows = g.dim == 1 ? 1 : n;
    std::vector<Eigen::Vector2d> out;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < n; ++i) {
            const Eigen::Index k = g.idx(i, j);
            if (w.values[k] > w_min) continue;
            const bool pos_nb =
                (i > 0 && w.values[k - 1] > w_min) ||
                (i + 1 < n && w.values[k + 1] > w_min) ||
                (g.dim == 2 && ((j > 0 && w.values[k - n] > w_min) ||
                                (j + 1 < rows && w.values[k + n] > w_min)));
            if (pos_nb) out.push_back(g.center(k));
        }
    return out;
}

namespace {

// spread `count` boundary-band cells in angle around the patch center,
// preferring hitting times near t_target
std::vector<Eigen::Vector2d> spread_points(const HittingField& T,
                                           const Eigen::Vector2d& about,
                                           double t_target, int count) {
    struct Cand {
        Eigen::Vector2d x;
        double t;
        double angle;
    };
    std::vector<Cand> cands;
    for (Eigen::Index k = 0; k < T.T.size(); ++k) {
        if (!std::isfinite(T.T[k]) || T.T[k] <= 0) continue;
        const Eigen::Vector2d x = T.grid.center(k);
        cands.push_back({x, T.T[k], std::atan2(x[1] - about[1], x[0] - about[0])});
    }
    std::vector<Eigen::Vector2d> out;
    if (cands.empty()) return out;
    for (int b = 0; b < count; ++b) {
        const double lo = -M_PI + 2.0 * M_PI * b / count;
        const double hi = lo + 2.0 * M_PI / count;
        const Cand* best = nullptr;
        for (const auto& c : cands) {
            if (c.angle < lo || c.angle >= hi) continue;
            if (!best || std::abs(c.t - t_target) < std::abs(best->t - t_target))
                best = &c;
        }
        if (best) out.push_back(best->x);
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads,
                                const std::string& out_dir) {
    namespace fs = std::filesystem;
    ExperimentResult result;
    VerificationReport& rep = result.report;

    SimConfig sim_cfg;
    sim_cfg.horizon = cfg.tau;
    sim_cfg.snapshot_count = cfg.snapshots;
    sim_cfg.cfl_safety = cfg.cfl_safety;
    sim_cfg.pme.limiter = cfg.limiter;
    sim_cfg.pme.nutrient.theta = cfg.theta;
    sim_cfg.pme.nutrient.split = cfg.split;

    // --- simulate (sweep members concurrently) ---
    result.runs.resize(cfg.gammas.size());
    std::vector<std::string> failures(cfg.gammas.size());
    parallel_for(long(cfg.gammas.size()), threads, [&](long i) {
        try {
            result.runs[size_t(i)] =
                simulate(initial_state(cfg, cfg.gammas[size_t(i)]), sim_cfg);
        } catch (const std::exception& ex) {
            failures[size_t(i)] = ex.what();
        }
    });
    for (size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw SolverError("simulate(gamma = " + std::to_string(cfg.gammas[i]) +
                              "): " + failures[i]);

    SimRun& main_run = result.runs.back();  // largest gamma stands in for the limit
    const double gamma_max = cfg.gammas.back();

    if (main_run.diag.support_margin_cells < 5)
        result.warnings.push_back(
            "support reached within 5 cells of the box edge (margin " +
            std::to_string(main_run.diag.support_margin_cells) + ")");

    auto add = [&](const std::string& name, double measured, double tol,
                   const std::string& claim) {
        rep.add(name, measured, cfg.tol(name, tol), claim);
    };

    // --- per-run diagnostics ---
    for (const SimRun& run : result.runs) {
        const std::string tag =
            result.runs.size() > 1
                ? "[gamma=" + std::to_string(int(std::lround(run.gamma))) + "] "
                : "";
        if (cfg.enabled("lower_bound"))
            rep.add(tag + "lower_bound", run.diag.lb_violation, cfg.tol("lower_bound", 1e-3),
                    "min n(t) >= e^{-t} min n(0)");
        if (cfg.enabled("max_principle") && run.gamma == gamma_max)
            add("max_principle", run.diag.maxn_drift, 1e-12,
                "max n(t) nonincreasing per step");
        if (cfg.enabled("positivity") && run.gamma == gamma_max)
            add("positivity", std::max(0.0, -run.diag.min_n), 0.0, "n >= 0");
        if (cfg.enabled("mass_balance") && run.gamma == gamma_max)
            add("mass_balance", run.diag.mass_drift_rel, 1e-8,
                "d/dt int rho = int rho n (conservative fluxes)");
        if (cfg.enabled("saturation_monotone") && run.gamma == gamma_max)
            add("saturation_monotone", run.diag.sat_drop, 1e-12,
                "rho never drops below 1 - 1/gamma once reached");
        if (cfg.enabled("overshoot") && run.gamma == gamma_max)
            add("overshoot", (run.diag.rho_max - 1.0) * run.gamma, 5.0,
                "rho <= 1 + C/gamma");
        if (cfg.enabled("support_margin") && run.gamma == gamma_max)
            add("support_margin",
                std::max(0.0, 5.0 - double(run.diag.support_margin_cells)), 0.0,
                "supp rho stays 5 cells away from the box edge");
    }

    // --- pressure consistency on the final state of the main run ---
    if (cfg.enabled("pressure_consistency")) {
        ReportEntry e = pressure_consistency(main_run.final_state,
                                             1.0 - 2.0 / gamma_max);
        e.tolerance = cfg.tol("pressure_consistency", e.tolerance);
        e.passed = e.measured <= e.tolerance;
        rep.add(e);
    }

    // --- AB moment ---
    double b_cal = 0.0;
    if (cfg.enabled("ab_moment") || cfg.enabled("ab_uniformity") ||
        cfg.enabled("hopf_lax")) {
        std::vector<const SimRun*> ptrs;
        for (const auto& r : result.runs) ptrs.push_back(&r);
        b_cal = calibrate_b(ptrs);
    }
    if (cfg.enabled("ab_moment")) {
        const AbMoment m_full = ab_moment(main_run, b_cal);
        add("ab_moment_finite", std::isfinite(m_full.value) ? 0.0 : 1.0, 0.0,
            "(b u_+ - 1) e^{b u_+} + 1 integrable at calibrated b");
        double worst = 0.0;
        double prev = ab_moment(main_run, b_cal / 4.0).value;
        for (double b : {b_cal / 2.0, b_cal}) {
            const double cur = ab_moment(main_run, b).value;
            worst = std::max(worst, prev - cur);
            prev = cur;
        }
        add("ab_monotone_in_b", worst, 0.0, "M_b nondecreasing in b");
    }
    if (cfg.enabled("ab_uniformity") && result.runs.size() >= 2) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& r : result.runs) {
            const double v = ab_moment(r, b_cal).value;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double ratio = lo > 0 ? hi / lo : (hi == 0.0 ? 1.0 : 1e300);
        add("ab_uniformity", ratio, 2.0, "M_b varies by <= 2x across gamma");
    }
    if (result.runs.size() >= 2 && cfg.enabled("l1_cauchy")) {
        double worst = 0.0;
        for (size_t i = 0; i + 2 < result.runs.size(); ++i) {
            const double d01 = l1_distance_final(result.runs[i], result.runs[i + 1]);
            const double d12 = l1_distance_final(result.runs[i + 1], result.runs[i + 2]);
            worst = std::max(worst, d12 - d01);
        }
        add("l1_cauchy", worst, 0.0,
            "L1 distance between consecutive gamma members decreases");
    }
    if (result.runs.size() >= 2 && cfg.enabled("support_nesting")) {
        // pressure supports across gamma agree within 2 cells at the horizon
        const double h = cfg.grid.h();
        double worst = 0.0;
        for (size_t i = 0; i + 1 < result.runs.size(); ++i) {
            const Field& pa = result.runs[i].final_state.p;
            const Field& pb = result.runs[i + 1].final_state.p;
            const double cut = 1e-8;
            for (Eigen::Index k = 0; k < pa.values.size(); ++k) {
                if (pa.values[k] <= cut && pb.values[k] <= cut) continue;
                if (pa.values[k] > cut && pb.values[k] > cut) continue;
                // distance to the other support
                const Field& other = pa.values[k] > cut ? pb : pa;
                double dmin = 1e300;
                for (Eigen::Index q = 0; q < other.values.size(); ++q)
                    if (other.values[q] > cut)
                        dmin = std::min(dmin,
                                        (cfg.grid.center(k) - cfg.grid.center(q)).norm());
                worst = std::max(worst, dmin);
            }
        }
        add("support_nesting", worst / h, 2.0,
            "pressure supports nest within 2 cells across gamma");
    }

    // --- Hopf-Lax ---
    std::vector<HopfLaxPair> hop_pairs;
    if (cfg.enabled("hopf_lax")) {
        HopfLaxParams hp;
        hp.b = b_cal;
        hp.theta = cfg.hopflax_theta;
        hp.pair_count = cfg.hopflax_pairs;
        auto [C, res] = scan_envelope_constant(main_run, hp, cfg.seed, threads);
        add("hopf_lax_violations", res.violated_fraction, 0.01,
            "p(x0,t0) <= e^Lambda (p(x1,t1) + |dx|^2/(4 int e^Lambda) + C dt^0.7 e^-lambda)");
        add("hopf_lax_envelope_C", C, 1024.0, "smallest passing dyadic C");
        hop_pairs = std::move(res.pairs);
    }
    if (cfg.enabled("hjb"))
        add("hjb_negative_part", hjb_residual(main_run), 0.05,
            "dp/dt - |grad p|^2 + u_+ p >= 0 against smooth weights");

    // --- Baiocchi / obstacle identity ---
    HittingField hitting;
    bool have_hitting = false;
    if (cfg.enabled("obstacle_identity") || cfg.enabled("eta_consistency") ||
        cfg.enabled("patch_agreement") || cfg.enabled("holder_fit") ||
        cfg.enabled("normal_map") || !out_dir.empty()) {
        hitting = hitting_time(main_run.w_history());
        have_hitting = true;
    }
    const Snapshot& last = main_run.snaps.back();
    if (cfg.enabled("obstacle_identity")) {
        auto res = obstacle_residual(last.w, last.eta, main_run.snaps.front().rho,
                                     last.rho);
        add("obstacle_identity_interior", res.interior, 0.05,
            "Lap w = rho_t - rho_0 - eta away from the free boundary");
        add("obstacle_identity_global", res.global, 2.0,
            "Lap w = rho_t - rho_0 - eta, all cells (front band included)");
    }
    if (cfg.enabled("eta_consistency")) {
        Field eta2 = eta_from_T(hitting, main_run.n_history(), last.t);
        const double diff = (eta2.values - last.eta.values).abs().maxCoeff();
        add("eta_consistency", diff, 0.05,
            "eta(x,t) = sgn_+(t - T(x)) int_T(x)^t n(x,s) ds");
    }
    if (cfg.enabled("patch_agreement")) {
        ReportEntry e = patch_agreement(last.w, last.rho, 1.0 - 2.0 / gamma_max,
                                        hitting.w_min);
        rep.add(e);
    }

    // --- hitting-time regularity ---
    if (cfg.enabled("holder_fit")) {
        double t_max = 0.0;
        for (Eigen::Index k = 0; k < hitting.T.size(); ++k)
            if (std::isfinite(hitting.T[k])) t_max = std::max(t_max, hitting.T[k]);
        auto pts = spread_points(hitting, cfg.center, cfg.holder_t_frac * t_max,
                                 cfg.holder_points);
        std::vector<double> radii;
        for (double m : cfg.holder_radii_h) radii.push_back(m * cfg.grid.h());
        const double alpha_d = exponent_constants(cfg.grid.dim == 1 ? 2 : cfg.grid.dim).alpha;
        double min_alpha = std::numeric_limits<double>::infinity();
        int fitted = 0;
        for (const auto& x : pts) {
            try {
                const HolderFit fit = holder_exponent(hitting, x, radii);
                min_alpha = std::min(min_alpha, fit.alpha);
                ++fitted;
            } catch (const std::domain_error&) {
            }
        }
        add("holder_exponent_floor",
            fitted ? std::max(0.0, alpha_d - 0.1 - min_alpha) : 1e300, 0.0,
            "fitted alpha-hat >= alpha_d - 0.1 at boundary points");
        add("holder_points_fitted", fitted > 0 ? 0.0 : 1.0, 0.0,
            "at least one boundary point admits an exponent fit");
    }

    // --- normals along the moving boundary ---
    NormalReport normals;
    if (cfg.enabled("normal_map")) {
        double t_max = 0.0;
        for (Eigen::Index k = 0; k < hitting.T.size(); ++k)
            if (std::isfinite(hitting.T[k])) t_max = std::max(t_max, hitting.T[k]);
        auto pts = spread_points(hitting, cfg.center, cfg.holder_t_frac * t_max,
                                 std::max(cfg.holder_points, 8));
        std::vector<double> radii;
        for (double m : cfg.blowup_radii_h) radii.push_back(m * cfg.grid.h());
        const double alpha_d = exponent_constants(2).alpha;
        normals = normal_map(main_run.snaps, hitting, pts, radii, alpha_d,
                             0.5 * cfg.grid.extent);
        double worst_deg = 0.0;
        for (size_t i = 0; i < normals.points.size(); ++i) {
            const Eigen::Vector2d radial =
                (normals.points[i] - cfg.center).normalized();
            const double c = std::max(-1.0, std::min(1.0, radial.dot(normals.normals[i])));
            worst_deg = std::max(worst_deg, std::acos(c) * 180.0 / M_PI);
        }
        add("normal_radial_deviation_deg",
            normals.points.empty() ? 180.0 : worst_deg, 5.0,
            "nu(x) = (x - c)/|x - c| on the expanding disk");
        add("normal_seminorm", normals.seminorm, cfg.tol("normal_seminorm", 50.0),
            "|nu(x)-nu(y)| <= K |x-y|^{alpha/(1+alpha)}");
    }

    // --- barrier supersolution ---
    ComparisonResult barrier_res;
    if (cfg.enabled("barrier")) {
        BarrierConfig bc;
        bc.x0 = cfg.barrier_x0;
        bc.r0 = cfg.barrier_r0;
        bc.nbar0 = cfg.n0;
        barrier_res = verify_comparison(main_run, bc);
        add("barrier_comparison", barrier_res.max_violation,
            0.02 * std::max(barrier_res.p_max, 1e-300),
            "p(t0 + t, x) <= psi(t, x) on the tracked annulus");
    }

    // --- artifacts ---
    if (!out_dir.empty()) {
        fs::create_directories(fs::path(out_dir) / "fields");
        rep.write_csv((fs::path(out_dir) / "report.csv").string());
        write_field_csv((fs::path(out_dir) / "fields" / "final_rho.csv").string(),
                        last.rho);
        write_field_csv((fs::path(out_dir) / "fields" / "final_p.csv").string(), last.p);
        write_field_csv((fs::path(out_dir) / "fields" / "final_n.csv").string(), last.n);
        write_field_csv((fs::path(out_dir) / "fields" / "final_w.csv").string(), last.w);
        write_field_csv((fs::path(out_dir) / "fields" / "final_eta.csv").string(),
                        last.eta);
        if (have_hitting) {
            CsvWriter w((fs::path(out_dir) / "fields" / "hitting.csv").string());
            w.row({"x", "y", "T"});
            for (Eigen::Index k = 0; k < hitting.T.size(); ++k) {
                const auto c = cfg.grid.center(k);
                w.row({csv_real(c[0]), csv_real(c[1]), csv_real(hitting.T[k])});
            }
        }
        if (result.runs.size() > 1) {
            CsvWriter w((fs::path(out_dir) / "sweep_summary.csv").string());
            w.row({"gamma", "tau", "b", "M_b", "l1_to_next_gamma"});
            for (size_t i = 0; i < result.runs.size(); ++i) {
                const double m = b_cal > 0 ? ab_moment(result.runs[i], b_cal).value
                                           : std::nan("");
                const double l1 = i + 1 < result.runs.size()
                                      ? l1_distance_final(result.runs[i],
                                                          result.runs[i + 1])
                                      : std::nan("");
                w.row({csv_real(result.runs[i].gamma), csv_real(cfg.tau),
                       csv_real(b_cal), csv_real(m), csv_real(l1)});
            }
        }
        if (!hop_pairs.empty()) {
            CsvWriter w((fs::path(out_dir) / "hopflax_pairs.csv").string());
            w.row({"t0", "t1", "dist", "lhs", "rhs", "violation"});
            for (const auto& p : hop_pairs)
                w.row({csv_real(p.t0), csv_real(p.t1), csv_real(p.dist),
                       csv_real(p.lhs), csv_real(p.rhs), csv_real(p.violation)});
        }
        if (cfg.enabled("barrier")) {
            CsvWriter w((fs::path(out_dir) / "trajectory.csv").string());
            w.row({"t", "r", "h_of_t", "pbar"});
            const auto& tr = barrier_res.trajectory;
            for (size_t k = 0; k < tr.t.size(); ++k)
                w.row({csv_real(tr.t[k]), csv_real(tr.r[k]), csv_real(tr.h_of_t[k]),
                       csv_real(tr.pbar[k])});
        }
        if (cfg.enabled("normal_map")) {
            CsvWriter w((fs::path(out_dir) / "classification.csv").string());
            w.row({"x", "y", "T", "label", "nu_x", "nu_y", "kernel_dim",
                   "density_at_min_r", "monneau_drift"});
            for (size_t i = 0; i < normals.points.size(); ++i)
                w.row({csv_real(normals.points[i][0]), csv_real(normals.points[i][1]),
                       csv_real(normals.hit_times[i]), label_of(PointType::Regular),
                       csv_real(normals.normals[i][0]), csv_real(normals.normals[i][1]),
                       "0", "", ""});
        }
    }
    return result;
}

}  // namespace heleshaw
