#include <doctest.h>

#include "heleshaw/baiocchi.hpp"
#include "heleshaw/sim.hpp"

using namespace heleshaw;

namespace {

SimState uniform_state(const Grid& g, double t, double p_val, double n_val) {
    SimState s;
    s.time = t;
    s.gamma = 4.0;
    s.rho = Field(g, p_val > 0 ? 1.0 : 0.0);
    s.p = Field(g, p_val);
    s.n = Field(g, n_val);
    return s;
}

}  // namespace

TEST_CASE("accumulate: trapezoid is exact on constants and linear ramps") {
    Grid g(1, 16, 1.0);
    BaiocchiAccumulator acc(g);

    SUBCASE("zero pressure stream gives w = 0") {
        acc.start(uniform_state(g, 0.0, 0.0, 0.0));
        acc.add(uniform_state(g, 1.0, 0.0, 0.0));
        CHECK(norm_linf(acc.w()) == 0.0);
    }
    SUBCASE("p = 1 over [0,2] gives w = 2 exactly") {
        acc.start(uniform_state(g, 0.0, 1.0, 0.0));
        for (int k = 1; k <= 20; ++k) acc.add(uniform_state(g, 0.1 * k, 1.0, 0.0));
        CHECK(acc.w().values[3] == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("p(t) = t over [0,1] gives w = 1/2 exactly") {
        acc.start(uniform_state(g, 0.0, 0.0, 0.0));
        for (int k = 1; k <= 10; ++k) acc.add(uniform_state(g, 0.1 * k, 0.1 * k, 0.0));
        CHECK(acc.w().values[0] == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("eta accumulates int rho n") {
        acc.start(uniform_state(g, 0.0, 1.0, 2.0));
        for (int k = 1; k <= 10; ++k) acc.add(uniform_state(g, 0.1 * k, 1.0, 2.0));
        CHECK(acc.eta().values[5] == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("accumulate rejects out-of-order states") {
    Grid g(1, 16, 1.0);
    BaiocchiAccumulator acc(g);
    acc.start(uniform_state(g, 0.5, 1.0, 0.0));
    CHECK_THROWS_AS(acc.add(uniform_state(g, 0.4, 1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("obstacle residual vanishes at t = 0 and in the far field") {
    Grid g(2, 48, 1.0);
    Field zero(g, 0.0);
    auto res = obstacle_residual(zero, zero, zero, zero);
    CHECK(res.global == 0.0);
    CHECK(res.interior == 0.0);
}

TEST_CASE("hitting_time: never reached, exact crossing, interpolation") {
    Grid g(1, 8, 1.0);
    std::vector<WSnapshot> hist;
    for (int k = 0; k <= 30; ++k) {
        WSnapshot s;
        s.t = 0.1 * k;
        s.w = Field(g, 0.0);
        // cell 2 follows w(t) = (t - 1)_+, cell 5 stays at zero
        s.w(2) = std::max(0.0, s.t - 1.0);
        hist.push_back(std::move(s));
    }
    HittingField T = hitting_time(hist, 1e-14);
    CHECK(T.T[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isinf(T.T[5]));
}

TEST_CASE("level sets of T nest by construction") {
    Grid g(1, 32, 1.0);
    std::vector<WSnapshot> hist;
    for (int k = 0; k <= 20; ++k) {
        WSnapshot s;
        s.t = 0.05 * k;
        s.w = Field(g);
        for (int i = 0; i < 32; ++i)
            s.w(i) = std::max(0.0, s.t - 0.03 * i);  // front sweeps right
        hist.push_back(std::move(s));
    }
    HittingField T = hitting_time(hist);
    for (int i = 0; i + 1 < 32; ++i)
        if (std::isfinite(T.T[i + 1])) CHECK(T.T[i] <= T.T[i + 1] + 1e-12);
}

TEST_CASE("eta_from_T: trivial and closed-form cases") {
    Grid g(1, 8, 1.0);
    std::vector<std::pair<double, Field>> n_hist;
    for (int k = 0; k <= 30; ++k) n_hist.emplace_back(0.1 * k, Field(g, 1.0));

    SUBCASE("T infinite everywhere gives eta = 0") {
        HittingField T{g, Eigen::ArrayXd::Constant(8, INFINITY), 1e-12};
        Field eta = eta_from_T(T, n_hist, 3.0);
        CHECK(norm_linf(eta) == 0.0);
    }
    SUBCASE("n = 1, T = 1, t = 3 gives eta = 2") {
        HittingField T{g, Eigen::ArrayXd::Constant(8, 1.0), 1e-12};
        Field eta = eta_from_T(T, n_hist, 3.0);
        CHECK(eta.values[4] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("coverage error when the history is too short") {
        HittingField T{g, Eigen::ArrayXd::Constant(8, 1.0), 1e-12};
        CHECK_THROWS_AS((void)eta_from_T(T, n_hist, 5.0), std::invalid_argument);
    }
}

TEST_CASE("holder_exponent recovers synthetic exponents 1.0 and 0.7") {
    Grid g(2, 128, 1.0);
    const Eigen::Vector2d x1 = g.center(g.idx(64, 64));  // exact lattice point
    for (double expo : {1.0, 0.7}) {
        HittingField T{g, Eigen::ArrayXd(g.size()), 1e-12};
        for (Eigen::Index k = 0; k < g.size(); ++k)
            T.T[k] = 2.0 - std::pow((g.center(k) - x1).norm(), expo);
        const double h = g.h();
        HolderFit fit = holder_exponent(T, x1, {4 * h, 8 * h, 16 * h, 32 * h});
        CHECK(std::abs(fit.alpha - expo) < 0.05);
    }
}

TEST_CASE("holder_exponent flags a constant field as degenerate") {
    Grid g(2, 64, 1.0);
    HittingField T{g, Eigen::ArrayXd::Constant(g.size(), 1.0), 1e-12};
    const double h = g.h();
    CHECK_THROWS_AS(
        (void)holder_exponent(T, {0.5, 0.5}, {4 * h, 8 * h, 16 * h}),
        std::domain_error);
}

TEST_CASE("holder_exponent rejects radii below 3h") {
    Grid g(2, 64, 1.0);
    HittingField T{g, Eigen::ArrayXd::Constant(g.size(), 1.0), 1e-12};
    CHECK_THROWS_AS((void)holder_exponent(T, {0.5, 0.5}, {g.h()}),
                    std::invalid_argument);
}

TEST_CASE("positivity sets of w nest and T is radially monotone on a disk run") {
    Grid g(2, 64, 1.0);
    SimState init;
    init.gamma = 20.0;
    init.rho = Field(g);
    init.p = Field(g);
    init.n = Field(g, 4.0);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double r = (g.center(k) - Eigen::Vector2d(0.5, 0.5)).norm();
        const double w = 1.0 - r * r / (0.2 * 0.2);
        init.p.values[k] = w > 0 ? 0.15 * w * w : 0.0;
    }
    init.rho.values = init.p.values.pow(1.0 / init.gamma);
    SimConfig cfg;
    cfg.horizon = 0.05;
    cfg.snapshot_count = 8;
    cfg.midpoint_samples = false;
    SimRun run = simulate(init, cfg);
    const double w_min = hitting_time(run.w_history()).w_min;
    for (size_t k = 0; k + 1 < run.snaps.size(); ++k)
        for (Eigen::Index c = 0; c < g.size(); ++c)
            if (run.snaps[k].w.values[c] > w_min)
                CHECK(run.snaps[k + 1].w.values[c] > w_min);

    // radial symmetry oracle: T monotone in |x - x0| up to one cell
    HittingField T = hitting_time(run.w_history());
    const double h = g.h();
    int finite = 0;
    for (Eigen::Index c = 0; c < g.size(); c += 7) {
        if (!std::isfinite(T.T[c])) continue;
        ++finite;
        const double r = (g.center(c) - Eigen::Vector2d(0.5, 0.5)).norm();
        for (Eigen::Index c2 = 0; c2 < g.size(); c2 += 7) {
            if (!std::isfinite(T.T[c2])) continue;
            const double r2 = (g.center(c2) - Eigen::Vector2d(0.5, 0.5)).norm();
            if (r2 < r - h) CHECK(T.T[c2] <= T.T[c] + 1e-12);
        }
    }
    CHECK(finite > 0);
}
