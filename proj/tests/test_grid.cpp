#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "susy/grid.hpp"
#include "susy/residual.hpp"

#include <cmath>

using namespace susy;

TEST_CASE("grid invariants") {
    Grid g{0.0, 1.0, 5};
    CHECK(g.h() == doctest::Approx(0.25));
    CHECK(g.x(0) == 0.0);
    CHECK(g.x(4) == doctest::Approx(1.0));

    CHECK_THROWS_AS(Grid({1.0, 0.0, 5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Grid({0.0, 1.0, 2}).validate(), std::invalid_argument);
}

TEST_CASE("derivative is exact on quadratics away from the ends") {
    Grid g{-2.0, 2.0, 401};
    GridFunction u = GridFunction::sample(g, [](double x) { return 3.0 * x * x - x + 1.0; });
    GridFunction d = derivative(u);
    for (int i = 1; i < g.n - 1; ++i) {
        CHECK(d[i] == doctest::Approx(6.0 * g.x(i) - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("derivative converges at second order") {
    auto err_at = [](int n) {
        Grid g{-1.0, 1.0, n};
        GridFunction u = GridFunction::sample(g, [](double x) { return std::sin(3.0 * x); });
        GridFunction d = derivative(u);
        double worst = 0.0;
        for (int i = 2; i < g.n - 2; ++i)
            worst = std::max(worst, std::fabs(d[i] - 3.0 * std::cos(3.0 * g.x(i))));
        return worst;
    };
    const double e1 = err_at(501), e2 = err_at(1001);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("trapezoid norm of a unit box function") {
    Grid g{0.0, 1.0, 1001};
    GridFunction u = GridFunction::sample(g, [](double x) { return std::sin(M_PI * x); });
    // ∫ sin²(πx) dx = 1/2 on [0,1]
    CHECK(inner(u, u) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("cubic interpolation reproduces cubics exactly") {
    Grid g{0.0, 2.0, 21};
    GridFunction u = GridFunction::sample(g, [](double x) { return x * x * x - 2.0 * x + 1.0; });
    for (double xq : {0.013, 0.5, 0.777, 1.031, 1.999}) {
        CHECK(interpolate_cubic(u, xq) ==
              doctest::Approx(xq * xq * xq - 2.0 * xq + 1.0).epsilon(1e-12));
    }
}

TEST_CASE("pole bookkeeping") {
    Grid g{0.0, 1.0, 11};
    GridFunction u = GridFunction::zeros(g);
    u.add_pole(5);
    u.add_pole(5);
    u.add_pole(2);
    CHECK(u.poles().size() == 2);
    CHECK(u.near_pole(4, 1));
    CHECK_FALSE(u.near_pole(7, 1));
    CHECK(u.near_pole(7, 2));

    GridFunction d = derivative(u);
    CHECK(d.near_pole(6, 0));
    CHECK(d.near_pole(1, 0));
}

TEST_CASE("residual report skips margins and pole windows") {
    Grid g{0.0, 1.0, 101};
    GridFunction d = GridFunction::zeros(g);
    d[0] = 100.0;   // inside margin
    d[50] = 7.0;    // flagged pole
    d.add_pole(50);
    d[30] = 0.5;
    ResidualReport r = residual_report(d, {2, 3});
    CHECK(r.max_abs == doctest::Approx(0.5));
    CHECK(r.argmax_x == doctest::Approx(0.30));
    CHECK(r.excluded_margin == 2);
    CHECK(r.points_used == 101 - 4 - 7);
    CHECK(r.max_abs >= r.mean_abs);
}

TEST_CASE("mismatched grids are rejected") {
    GridFunction u = GridFunction::zeros({0.0, 1.0, 11});
    GridFunction v = GridFunction::zeros({0.0, 1.0, 12});
    CHECK_THROWS_AS(inner(u, v), std::invalid_argument);
}
