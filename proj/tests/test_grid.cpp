#include <doctest.h>

#include <functional>
#include <random>

#include "heleshaw/stencil.hpp"

using namespace heleshaw;

namespace {

Field fill(const Grid& g, const std::function<double(double, double)>& f) {
    Field out(g);
    for (Eigen::Index k = 0; k < out.values.size(); ++k) {
        const auto c = g.center(k);
        out.values[k] = f(c[0], c[1]);
    }
    return out;
}

double interior_max_error(const Field& got, const Field& want, int margin) {
    const Grid& g = got.grid;
    double worst = 0.0;
    const int rows = g.dim == 1 ? 1 : g.cells;
    for (int j = 0; j < rows; ++j) {
        if (g.dim == 2 && (j < margin || j >= rows - margin)) continue;
        for (int i = margin; i < g.cells - margin; ++i)
            worst = std::max(worst, std::abs(got(i, j) - want(i, j)));
    }
    return worst;
}

}  // namespace

TEST_CASE("laplacian annihilates constants") {
    for (int dim : {1, 2}) {
        Grid g(dim, 32, 1.0);
        Field f(g, 3.7);
        CHECK(norm_linf(laplacian(f)) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("laplacian of x^2 is 2 in the interior (1D Taylor oracle)") {
    Grid g(1, 64, 2.0, {-1, 0});
    Field f = fill(g, [](double x, double) { return x * x; });
    Field want(g, 2.0);
    CHECK(interior_max_error(laplacian(f), want, 1) < 1e-10);  // exact on quadratics
}

TEST_CASE("laplacian of x^2 + y^2 is 4 in the interior (2D Taylor oracle)") {
    Grid g(2, 48, 2.0, {-1, -1});
    Field f = fill(g, [](double x, double y) { return x * x + y * y; });
    Field want(g, 4.0);
    CHECK(interior_max_error(laplacian(f), want, 1) < 1e-9);
}

TEST_CASE("laplacian rejects tiny grids") {
    Grid g(1, 2, 1.0);
    Field f(g, 1.0);
    CHECK_THROWS_AS((void)laplacian(f), std::invalid_argument);
}

TEST_CASE("grad_sq on constants and affine fields") {
    Grid g1(1, 64, 2.0, {-1, 0});
    CHECK(norm_linf(grad_sq(Field(g1, 5.0))) == doctest::Approx(0.0));
    Field lin = fill(g1, [](double x, double) { return 3.0 * x; });
    Field want(g1, 9.0);
    CHECK(interior_max_error(grad_sq(lin), want, 1) < 1e-10);

    Grid g2(2, 48, 2.0, {-1, -1});
    Field plane = fill(g2, [](double x, double y) { return x + 2.0 * y; });
    Field want2(g2, 5.0);
    CHECK(interior_max_error(grad_sq(plane), want2, 1) < 1e-10);
}

TEST_CASE("laplacian is linear, grad_sq quadratic under scaling") {
    Grid g(2, 24, 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1, 1);
    Field f(g), q(g);
    for (Eigen::Index k = 0; k < f.values.size(); ++k) {
        f.values[k] = unif(rng);
        q.values[k] = unif(rng);
    }
    const double a = 1.7, b = -0.3;
    Field combo(g);
    combo.values = a * f.values + b * q.values;
    Field lhs = laplacian(combo);
    Field rhs(g);
    rhs.values = a * laplacian(f).values + b * laplacian(q).values;
    CHECK((lhs.values - rhs.values).abs().maxCoeff() <
          1e-9 * std::max(1.0, norm_linf(lhs)));

    Field scaled(g);
    scaled.values = 2.0 * f.values;
    CHECK((grad_sq(scaled).values - 4.0 * grad_sq(f).values).abs().maxCoeff() <
          1e-9 * std::max(1.0, 4.0 * norm_linf(grad_sq(f))));
}

TEST_CASE("discrete divergence theorem: zero net flux under Neumann closure") {
    Grid g(2, 40, 1.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1, 1);
    Field f(g);
    for (Eigen::Index k = 0; k < f.values.size(); ++k) f.values[k] = unif(rng);
    const double total = integral(laplacian(f));
    CHECK(std::abs(total) <= 1e-10 * norm_l1(laplacian(f)));
}

TEST_CASE("interior stencil error shrinks by >= 3.5x when h halves") {
    auto err_at = [](int cells) {
        Grid g(2, cells, 2.0, {-1, -1});
        Field f = fill(g, [](double x, double y) {
            return std::sin(2.0 * x) * std::cos(1.5 * y);
        });
        Field want = fill(g, [](double x, double y) {
            return -(4.0 + 2.25) * std::sin(2.0 * x) * std::cos(1.5 * y);
        });
        return interior_max_error(laplacian(f), want, 2);
    };
    const double e1 = err_at(64), e2 = err_at(128);
    CHECK(e1 / e2 >= 3.5);  // empirical order >= 1.8
}

TEST_CASE("radial_sample: constants, affine exactness, quadratic mean") {
    Grid g(2, 128, 2.0, {-1, -1});
    Field one(g, 1.0);
    for (double v : radial_sample(one, {0, 0}, 0.5, 16))
        CHECK(v == doctest::Approx(1.0));

    Field fx = fill(g, [](double x, double) { return x; });
    const double r = 0.4;
    auto vals = radial_sample(fx, {0, 0}, r, 32);
    for (int k = 0; k < 32; ++k)
        CHECK(vals[size_t(k)] ==
              doctest::Approx(r * std::cos(2.0 * M_PI * k / 32.0)).epsilon(1e-9));

    Field r2 = fill(g, [](double x, double y) { return x * x + y * y; });
    auto samples = radial_sample(r2, {0, 0}, r, 64);
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= double(samples.size());
    const double h = g.h();
    CHECK(std::abs(mean - r * r) < 2.0 * h * h);
}

TEST_CASE("radial_sample rejects bad circles") {
    Grid g(2, 32, 1.0);
    Field f(g, 0.0);
    CHECK_THROWS_AS((void)radial_sample(f, {0.9, 0.5}, 0.3, 16),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)radial_sample(f, {0.5, 0.5}, 0.3, 4),
                    std::invalid_argument);
}

TEST_CASE("radial_sample in 1D returns the two endpoint values") {
    Grid g(1, 64, 2.0, {-1, 0});
    Field f = fill(g, [](double x, double) { return 2.0 * x + 1.0; });
    auto vals = radial_sample(f, {0.25, 0}, 0.5, 8);
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == doctest::Approx(2.0 * (-0.25) + 1.0).epsilon(1e-9));
    CHECK(vals[1] == doctest::Approx(2.0 * 0.75 + 1.0).epsilon(1e-9));
}

TEST_CASE("grid geometry invariants") {
    Grid g(2, 128, 2.0, {-1, -1});
    CHECK(g.h() == doctest::Approx(2.0 / 128));
    CHECK(g.size() == 128 * 128);
    CHECK_THROWS_AS(Grid(3, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(2, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(2, 8, -1.0), std::invalid_argument);
}
