// Experiment runner: parses a config, orchestrates the solvers, and emits CSV
// artifacts plus a consolidated verification report.
//
// Exit codes: 0 all enabled checks pass, 1 check failure, 2 usage/config
// error, 3 internal solver error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "heleshaw/experiment.hpp"

namespace fs = std::filesystem;
using namespace heleshaw;

namespace {

int thread_count(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("HELESHAW_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

void print_report(const VerificationReport& rep) {
    for (const auto& e : rep.entries())
        std::cout << (e.passed ? "[pass] " : "[FAIL] ") << e.name << ": "
                  << csv_real(e.measured) << " (tol " << csv_real(e.tolerance)
                  << ")\n";
}

int run_config(const std::string& config_path, const std::string& out_dir,
               long seed_override, int threads,
               const std::vector<std::string>& check_filter,
               const std::vector<std::string>& forced_checks) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (seed_override >= 0) cfg.seed = std::uint64_t(seed_override);
    if (!check_filter.empty()) cfg.checks = check_filter;
    if (!forced_checks.empty()) cfg.checks = forced_checks;
    ExperimentResult res = run_experiment(cfg, threads, out_dir);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    print_report(res.report);
    return res.report.all_passed() ? 0 : 1;
}

int classify_field(const std::string& input, const std::string& out_dir,
                   double source, int max_points) {
    Field w = read_field_csv(input);
    const double w_min =
        10.0 * std::numeric_limits<double>::epsilon() * w.values.maxCoeff();
    auto pts = boundary_points(w, w_min);
    if (pts.size() > size_t(max_points)) pts.resize(size_t(max_points));
    const double h = w.grid.h();
    const std::vector<double> radii = {16 * h, 8 * h, 4 * h};

    fs::create_directories(out_dir);
    CsvWriter out((fs::path(out_dir) / "classification.csv").string());
    out.row({"x", "y", "T", "label", "nu_x", "nu_y", "kernel_dim",
             "density_at_min_r", "monneau_drift"});
    for (const auto& x : pts) {
        try {
            auto ladder = blowup(w, x, radii, source);
            auto c = classify(ladder, source);
            std::string label = c.label == PointType::Regular    ? "regular"
                                : c.label == PointType::Singular ? "singular"
                                                                 : "unresolved";
            double drift = 0.0;
            if (c.label == PointType::Singular) {
                Eigen::Matrix2d q = ladder.back().Q;
                if (q.trace() > 0) q *= source / q.trace();
                auto xi = monneau(w, x, q, radii);
                for (size_t k = 0; k + 1 < xi.size(); ++k)
                    drift = std::max(drift, xi[k + 1].second - xi[k].second);
            }
            out.row({csv_real(x[0]), csv_real(x[1]), "", label,
                     csv_real(c.nu[0]), csv_real(c.nu[1]),
                     std::to_string(c.kernel_dim),
                     csv_real(c.density_at_min_r), csv_real(drift)});
        } catch (const std::invalid_argument&) {
            out.row({csv_real(x[0]), csv_real(x[1]), "", "skipped", "", "", "", "", ""});
        }
    }
    std::cout << "classified " << pts.size() << " boundary points\n";
    return 0;
}

int merge_reports(const std::vector<std::string>& dirs, const std::string& out_dir) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& d : dirs) {
        std::ifstream in(fs::path(d) / "report.csv");
        if (!in) throw ConfigError("report: cannot open " + d + "/report.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto cells = csv_split(line);
            cells.insert(cells.begin(), fs::path(d).filename().string());
            rows.push_back(std::move(cells));
        }
    }
    std::sort(rows.begin(), rows.end());
    fs::create_directories(out_dir);
    CsvWriter out((fs::path(out_dir) / "report.csv").string());
    out.row({"run", "check", "measured", "tolerance", "pass", "claim"});
    bool all_pass = true;
    for (auto& r : rows) {
        out.row(r);
        if (r.size() > 4 && r[4] != "pass") all_pass = false;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hele-Shaw tumor-growth laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, input_csv, points_mode = "boundary";
    long seed = -1;
    int threads = 0, max_points = 64;
    double source = 1.0;
    std::vector<std::string> checks, merge_dirs, gammas_text;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "experiment config file")
                ->required();
        sub->add_option("--out", out_dir, "artifact directory");
        sub->add_option("--seed", seed, "RNG seed override");
        sub->add_option("--threads", threads,
                        "worker threads (HELESHAW_THREADS as fallback)");
        return sub;
    };

    auto* c_run = add_common(app.add_subcommand("run", "full pipeline"), true);
    c_run->add_option("--check", checks, "run only the named checks")->delimiter(',');
    auto* c_sim = add_common(
        app.add_subcommand("simulate", "simulate and write artifacts, no checks"),
        true);
    auto* c_sweep = add_common(
        app.add_subcommand("sweep", "gamma sweep toward the incompressible limit"),
        true);
    c_sweep->add_option("--gammas", gammas_text, "override pme.gamma")->delimiter(',');
    add_common(app.add_subcommand("hopflax", "Hopf-Lax and HJB verification"), true);
    add_common(app.add_subcommand("barrier", "radial supersolution comparison"), true);
    auto* c_classify =
        app.add_subcommand("classify", "free-boundary point classification");
    c_classify->add_option("--config", config_path, "experiment config file");
    c_classify->add_option("--input", input_csv, "w field CSV to classify");
    c_classify->add_option("--points", points_mode, "point selection (boundary)");
    c_classify->add_option("--out", out_dir, "artifact directory");
    c_classify->add_option("--source", source, "obstacle source at the points");
    c_classify->add_option("--max-points", max_points, "cap on classified points");
    c_classify->add_option("--threads", threads, "worker threads");
    auto* c_report = app.add_subcommand("report", "merge run reports");
    c_report->add_option("--merge", merge_dirs, "run directories to merge")
        ->required()
        ->expected(-1);
    c_report->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const int nthreads = thread_count(threads);
        if (app.got_subcommand(c_run))
            return run_config(config_path, out_dir, seed, nthreads, checks, {});
        if (app.got_subcommand(c_sim))
            return run_config(config_path, out_dir, seed, nthreads, {}, {"none"});
        if (app.got_subcommand(c_sweep)) {
            ExperimentConfig cfg = load_experiment_config(config_path);
            if (!gammas_text.empty()) {
                std::string joined;
                for (const auto& g : gammas_text) joined += g + " ";
                cfg.raw.set("pme.gamma", joined);
                cfg = experiment_from_config(cfg.raw);
            }
            if (cfg.gammas.size() < 3)
                throw ConfigError("sweep: need at least 3 gamma values");
            if (seed >= 0) cfg.seed = std::uint64_t(seed);
            ExperimentResult res = run_experiment(cfg, nthreads, out_dir);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            print_report(res.report);
            return res.report.all_passed() ? 0 : 1;
        }
        if (app.got_subcommand("hopflax"))
            return run_config(config_path, out_dir, seed, nthreads, {},
                              {"hopf_lax", "hjb"});
        if (app.got_subcommand("barrier"))
            return run_config(config_path, out_dir, seed, nthreads, {},
                              {"barrier", "lower_bound"});
        if (app.got_subcommand(c_classify)) {
            if (!input_csv.empty())
                return classify_field(input_csv, out_dir.empty() ? "." : out_dir,
                                      source, max_points);
            if (config_path.empty())
                throw ConfigError("classify: need --input or --config");
            ExperimentConfig cfg = load_experiment_config(config_path);
            cfg.checks = {"normal_map"};
            ExperimentResult res =
                run_experiment(cfg, nthreads, out_dir.empty() ? "." : out_dir);
            print_report(res.report);
            return res.report.all_passed() ? 0 : 1;
        }
        if (app.got_subcommand(c_report)) return merge_reports(merge_dirs, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
