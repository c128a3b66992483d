#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "susy/deformation.hpp"
#include "susy/grid.hpp"
#include "susy/pipeline.hpp"

#include <cmath>

using namespace susy;

namespace {

DeformationProblem linear_w_problem(const Grid& g, double K, DeformationSign sign, double x0,
                                    double u0, double du0) {
    DeformationProblem p;
    p.W = GridFunction::sample(g, [](double x) { return x; });
    p.K = K;
    p.sign = sign;
    p.x0 = x0;
    p.u0 = u0;
    p.du0 = du0;
    p.w_sampler = [](double x) { return x; };
    return p;
}

}  // namespace

TEST_CASE("chi residual closed forms") {
    Grid g{0.5, 5.0, 1001};
    DeformationProblem p = linear_w_problem(g, -2.0, DeformationSign::plus, 1.0, 1.0, 1.0);

    SUBCASE("chi = 0 leaves |K|") {
        GridFunction z = GridFunction::zeros(g);
        CHECK(chi_residual(z, p).max_abs == doctest::Approx(2.0));
        DeformationProblem p0 = p;
        p0.K = 0.0;
        CHECK(chi_residual(z, p0).max_abs == 0.0);
    }
    SUBCASE("chi = 1/x with W = x, plus sign, K = -2") {
        GridFunction chi = GridFunction::sample(g, [](double x) { return 1.0 / x; });
        // numeric D on 1/x is O(h²); the algebra cancels the rest
        CHECK(chi_residual(chi, p).max_abs < 5e-4);
        DeformationProblem pwrong = p;
        pwrong.K = 0.0;
        ResidualReport r = chi_residual(chi, pwrong);
        CHECK(r.max_abs == doctest::Approx(2.0).epsilon(1e-2));
    }
}

TEST_CASE("solve_chi recovers u = x for W = x, K = -2, plus sign") {
    Grid g{0.5, 5.0, 2001};
    DeformationProblem p = linear_w_problem(g, -2.0, DeformationSign::plus, 1.0, 1.0, 1.0);
    GridFunction chi = solve_chi(p, g);
    CHECK(chi.poles().empty());
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) worst = std::max(worst, std::fabs(chi[i] - 1.0 / g.x(i)));
    CHECK(worst < 1e-8);
}

TEST_CASE("K = 0 with zero slope seed gives a constant u and chi = 0") {
    Grid g{-3.0, 3.0, 1201};
    DeformationProblem p = linear_w_problem(g, 0.0, DeformationSign::minus, 0.0, 2.0, 0.0);
    GridFunction chi = solve_chi(p, g);
    for (int i = 0; i < g.n; ++i) CHECK(std::fabs(chi[i]) < 1e-12);
}

TEST_CASE("integrator self-check on a generic seed") {
    Grid g{1.0, 5.0, 4001};  // step 1e-3
    DeformationProblem p = linear_w_problem(g, -2.0, DeformationSign::plus, 2.0, 0.7, -0.4);
    GridFunction chi = solve_chi(p, g);
    ResidualOptions opts;
    opts.pole_window = static_cast<int>(std::ceil(0.2 / g.h()));
    CHECK(chi_residual(chi, p, opts).max_abs < 1e-6);
}

TEST_CASE("sign duality: flipping the sign equals flipping W") {
    Grid g{-2.0, 2.0, 1501};
    DeformationProblem plus = linear_w_problem(g, 1.0, DeformationSign::plus, 0.0, 1.0, 0.3);
    DeformationProblem minus_flipped = plus;
    minus_flipped.sign = DeformationSign::minus;
    minus_flipped.W = GridFunction::sample(g, [](double x) { return -x; });
    minus_flipped.w_sampler = [](double x) { return -x; };
    GridFunction ca = solve_chi(plus, g);
    GridFunction cb = solve_chi(minus_flipped, g);
    for (int i = 0; i < g.n; ++i) {
        if (ca.near_pole(i, 2) || cb.near_pole(i, 2)) continue;
        CHECK(ca[i] == doctest::Approx(cb[i]).epsilon(1e-10).scale(std::fabs(ca[i]) + 1.0));
    }
}

TEST_CASE("pole sets of two generic seeds interlace") {
    // oscillatory regime so u has many zeros
    Grid g{-6.0, 6.0, 6001};
    DeformationProblem a = linear_w_problem(g, 25.0, DeformationSign::minus, 0.0, 1.0, 0.0);
    DeformationProblem b = linear_w_problem(g, 25.0, DeformationSign::minus, 0.0, 0.0, 1.0);
    GridFunction ca = solve_chi(a, g);
    GridFunction cb = solve_chi(b, g);
    REQUIRE(ca.poles().size() > 3);
    REQUIRE(cb.poles().size() > 3);
    // Sturm separation: pole counts on closed subintervals differ by <= 1
    auto count_in = [&](const GridFunction& c, double lo, double hi) {
        int cnt = 0;
        for (int q : c.poles())
            if (c.x(q) >= lo && c.x(q) <= hi) ++cnt;
        return cnt;
    };
    for (double lo = -5.0; lo < 4.0; lo += 1.5) {
        const int na = count_in(ca, lo, lo + 1.5);
        const int nb = count_in(cb, lo, lo + 1.5);
        CHECK(std::abs(na - nb) <= 1);
    }
}

TEST_CASE("route equivalence for the oscillator extension") {
    Grid g{-8.0, 8.0, 2001};
    ExtensionConfig cfg;
    cfg.family = "harmonic_oscillator";
    cfg.eigenindex = 1;
    NodePtr node = make_stage1_node(cfg, g);

    // matched sign and constant: u'' - 2xu' + 2u = 0 has the solution u = x
    DeformationProblem p = linear_w_problem(g, cfg.alpha * cfg.alpha * node->K,
                                            DeformationSign::minus, 1.0, 1.0, 1.0);
    GridFunction chi = solve_chi(p, g);

    ResidualOptions opts;
    opts.pole_window = static_cast<int>(std::ceil(0.5 / g.h()));
    // compare on the well-conditioned window
    GridFunction chi_win = chi;
    for (int i = 0; i < g.n; ++i)
        if (std::fabs(g.x(i)) > 3.0) chi_win.add_pole(i);
    RouteComparison cmp = route_equivalence(chi_win, node->F, cfg.alpha, opts);
    CHECK(cmp.scale == doctest::Approx(1.0));
    CHECK(cmp.report.max_abs < 1e-4);
    CHECK(cmp.points_compared > 100);

    // wrong sign: far off
    DeformationProblem bad = p;
    bad.sign = DeformationSign::plus;
    GridFunction chi_bad = solve_chi(bad, g);
    for (int i = 0; i < g.n; ++i)
        if (std::fabs(g.x(i)) > 3.0) chi_bad.add_pole(i);
    RouteComparison cb = route_equivalence(chi_bad, node->F, cfg.alpha, opts);
    CHECK(cb.report.max_abs > 1e-1);
}

TEST_CASE("seed validation and blow-up reporting") {
    Grid g{0.5, 5.0, 101};
    DeformationProblem p = linear_w_problem(g, -2.0, DeformationSign::plus, 1.0, 0.0, 0.0);
    CHECK_THROWS_AS(solve_chi(p, g), std::invalid_argument);

    // exponential blow-up: W = -x with the plus sign feeds u'' = 2x u' ...
    Grid gb{-40.0, 40.0, 4001};
    DeformationProblem pb;
    pb.W = GridFunction::sample(gb, [](double x) { return -x; });
    pb.K = -1.0;
    pb.sign = DeformationSign::plus;
    pb.x0 = 0.0;
    pb.u0 = 1.0;
    pb.du0 = 1.0;
    pb.w_sampler = [](double x) { return -x; };
    CHECK_THROWS_WITH_AS(solve_chi(pb, gb), doctest::Contains("blow-up"), std::runtime_error);
}
