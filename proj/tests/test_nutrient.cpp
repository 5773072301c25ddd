#include <doctest.h>

#include <random>

#include "heleshaw/nutrient.hpp"
#include "oracles.hpp"

using namespace heleshaw;

namespace {

NutrientParams params(double dt, double theta = 0.5) {
    NutrientParams p;
    p.dt = dt;
    p.theta = theta;
    return p;
}

}  // namespace

TEST_CASE("constant nutrient is a steady state without absorption") {
    Grid g(2, 32, 1.0);
    Field n(g, 2.5), rho(g, 0.0);
    Field out = step_nutrient(n, rho, params(1e-3));
    CHECK((out.values - 2.5).abs().maxCoeff() < 1e-13);
}

TEST_CASE("uniform absorption matches the scalar ODE n' = -n") {
    // theta = 1/2 step of the absorption factor is e^{-dt} + O(dt^3)
    Grid g(1, 16, 1.0);
    const double dt = 0.05;
    Field n(g, 2.0), rho(g, 1.0);
    Field out = step_nutrient(n, rho, params(dt));
    const double exact = 2.0 * std::exp(-dt);
    CHECK(std::abs(out.values[4] - exact) < 2.0 * dt * dt * dt);

    // fully implicit uses the 1/(1 + dt rho) factor
    Field out1 = step_nutrient(n, rho, params(dt, 1.0));
    CHECK(out1.values[4] == doctest::Approx(2.0 / (1.0 + dt)).epsilon(1e-12));
}

TEST_CASE("multi-step uniform absorption stays within O(dt^2) of e^{-t}") {
    Grid g(1, 8, 1.0);
    const double dt = 0.01, T = 1.0;
    Field n(g, 1.0), rho(g, 1.0);
    for (int k = 0; k < int(T / dt + 0.5); ++k) n = step_nutrient(n, rho, params(dt));
    CHECK(std::abs(n.values[0] - std::exp(-1.0)) < 1e-4);
}

TEST_CASE("Gaussian spreads with the heat kernel law sigma^2 = sigma0^2 + 2t") {
    Grid g(2, 128, 1.0);
    const double sigma0 = 0.06, amp = 1.0, tau = 0.003;
    Field n(g), rho(g, 0.0);
    for (Eigen::Index k = 0; k < n.values.size(); ++k) {
        const auto c = g.center(k);
        n.values[k] = oracles::gaussian_2d(c[0] - 0.5, c[1] - 0.5, 0.0, sigma0, amp);
    }
    const double dt = tau / 50.0;
    for (int k = 0; k < 50; ++k) n = step_nutrient(n, rho, params(dt));
    double worst = 0.0, scale = 0.0;
    for (Eigen::Index k = 0; k < n.values.size(); ++k) {
        const auto c = g.center(k);
        const double exact =
            oracles::gaussian_2d(c[0] - 0.5, c[1] - 0.5, tau, sigma0, amp);
        worst = std::max(worst, std::abs(n.values[k] - exact));
        scale = std::max(scale, exact);
    }
    CHECK(worst / scale < 0.01);
}

TEST_CASE("explicit scheme enforces its CFL bound") {
    Grid g(2, 32, 1.0);
    Field n(g, 1.0), rho(g, 0.0);
    const double h = g.h();
    CHECK_THROWS_AS((void)step_nutrient(n, rho, params(h * h, 0.0)), StabilityError);
    CHECK_NOTHROW((void)step_nutrient(n, rho, params(0.2 * h * h, 0.0)));
}

TEST_CASE("positivity and maximum principle in the monotone regime") {
    Grid g(2, 24, 1.0);
    const double h = g.h();
    Field n(g), rho(g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0, 1);
    for (Eigen::Index k = 0; k < n.values.size(); ++k) {
        n.values[k] = unif(rng);
        rho.values[k] = unif(rng);
    }
    double prev_max = n.values.maxCoeff();
    for (int k = 0; k < 50; ++k) {
        n = step_nutrient(n, rho, params(0.4 * h * h));
        CHECK(n.values.minCoeff() >= 0.0);
        CHECK(n.values.maxCoeff() <= prev_max + 1e-12);
        prev_max = n.values.maxCoeff();
    }
}

TEST_CASE("splitting order is configurable and agrees to O(dt^2)") {
    Grid g(1, 32, 1.0);
    Field n(g), rho(g, 0.5);
    for (int i = 0; i < 32; ++i) n(i) = 1.0 + 0.2 * std::sin(2.0 * M_PI * i / 32.0);
    NutrientParams a = params(1e-4);
    NutrientParams b = a;
    b.split = SplitOrder::AbsorbThenDiffuse;
    Field na = step_nutrient(n, rho, a);
    Field nb = step_nutrient(n, rho, b);
    CHECK((na.values - nb.values).abs().maxCoeff() < 1e-7);
}

TEST_CASE("lower-bound diagnostic: saturation and slack cases") {
    Grid g(1, 16, 1.0);
    // rho = 1, n uniform: n(t) = e^{-t} n0 saturates the bound
    std::vector<std::pair<double, Field>> hist;
    const double dt = 1e-3;
    Field n(g, 1.0), rho1(g, 1.0);
    double t = 0.0;
    for (int k = 0; k < 200; ++k) {
        n = step_nutrient(n, rho1, params(dt));
        t += dt;
        hist.emplace_back(t, n);
    }
    ReportEntry e = check_lower_bound(hist, 1.0);
    CHECK(e.passed);
    CHECK(e.measured < 1e-6);

    // rho = 0: the minimum never decays at all
    hist.clear();
    Field m(g);
    for (int i = 0; i < 16; ++i) m(i) = 1.0 + 0.3 * std::cos(2.0 * M_PI * i / 16.0);
    Field rho0(g, 0.0);
    const double m0 = m.values.minCoeff();
    t = 0.0;
    for (int k = 0; k < 200; ++k) {
        m = step_nutrient(m, rho0, params(dt));
        t += dt;
        hist.emplace_back(t, m);
    }
    ReportEntry e0 = check_lower_bound(hist, m0);
    CHECK(e0.passed);
    CHECK(e0.measured == 0.0);
}

TEST_CASE("lower bound holds for a mixed absorption patch") {
    Grid g(2, 48, 1.0);
    Field n(g, 1.0), rho(g);
    for (Eigen::Index k = 0; k < rho.values.size(); ++k)
        rho.values[k] = (g.center(k) - Eigen::Vector2d(0.5, 0.5)).norm() < 0.2 ? 1.0 : 0.0;
    std::vector<std::pair<double, Field>> hist;
    const double dt = 5e-4;
    double t = 0.0;
    for (int k = 0; k < 400; ++k) {
        n = step_nutrient(n, rho, params(dt));
        t += dt;
        if (k % 20 == 0) hist.emplace_back(t, n);
    }
    ReportEntry e = check_lower_bound(hist, 1.0);
    CHECK(e.measured <= 1e-3);
}
