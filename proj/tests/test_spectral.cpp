#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "susy/family.hpp"
#include "susy/grid.hpp"
#include "susy/operators.hpp"
#include "susy/spectral.hpp"

#include <cmath>

using namespace susy;

TEST_CASE("tridiagonal core agrees with the analytic spectrum of -u''") {
    // Dirichlet Laplacian on [0,1] with n interior points has eigenvalues
    // (2/h²)(1 - cos(k pi h)); check the solver against that exact formula.
    const int m = 500;
    const double h = 1.0 / (m + 1);
    std::vector<double> d(m, 2.0 / (h * h)), e(m - 1, -1.0 / (h * h));
    auto ev = tridiag_lowest_eigenvalues(d, e, 4);
    for (int k = 1; k <= 4; ++k) {
        const double exact = 2.0 / (h * h) * (1.0 - std::cos(k * M_PI * h));
        CHECK(ev[k - 1] == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("particle in a box") {
    Grid g{0.0, 1.0, 2001};
    GridFunction V = GridFunction::zeros(g);
    SpectrumResult r = solve_schrodinger(V, 3);
    for (int k = 1; k <= 3; ++k) {
        const double exact = k * k * M_PI * M_PI;
        CHECK(std::fabs(r.eigenvalues[k - 1] - exact) / exact < 1e-3);
    }
}

TEST_CASE("oscillator with Richardson extrapolation") {
    Grid g{-10.0, 10.0, 2001};
    GridFunction V = GridFunction::sample(g, [](double x) { return x * x; });
    SolveOptions opts;
    opts.richardson = true;
    opts.potential_sampler = [](double x) { return x * x; };
    SpectrumResult r = solve_schrodinger(V, 5, opts);
    for (int k = 0; k < 5; ++k) {
        CHECK(std::fabs(r.eigenvalues[k] - (2.0 * k + 1.0)) < 1e-3);
    }
    // V+ = x² - 1 is the same spectrum shifted down by one
    GridFunction Vp = GridFunction::sample(g, [](double x) { return x * x - 1.0; });
    opts.potential_sampler = [](double x) { return x * x - 1.0; };
    SpectrumResult rp = solve_schrodinger(Vp, 5, opts);
    for (int k = 0; k < 5; ++k) {
        CHECK(std::fabs(rp.eigenvalues[k] - 2.0 * k) < 1e-3);
    }
}

TEST_CASE("Richardson really improves the h² error") {
    Grid g{-10.0, 10.0, 1001};
    GridFunction V = GridFunction::sample(g, [](double x) { return x * x; });
    SolveOptions plain, rich;
    rich.richardson = true;
    rich.potential_sampler = [](double x) { return x * x; };
    const double e_plain = std::fabs(solve_schrodinger(V, 3, plain).eigenvalues[2] - 5.0);
    const double e_rich = std::fabs(solve_schrodinger(V, 3, rich).eigenvalues[2] - 5.0);
    CHECK(e_rich < 0.05 * e_plain);
}

TEST_CASE("eigenfunctions: normalization, sign, oscillation, leakage check") {
    Grid g{-8.0, 8.0, 1601};
    GridFunction V = GridFunction::sample(g, [](double x) { return x * x; });
    SolveOptions opts;
    opts.want_vectors = true;
    SpectrumResult r = solve_schrodinger(V, 4, opts);
    CHECK(r.meta.warnings.empty());
    for (int k = 0; k < 4; ++k) {
        const GridFunction& psi = r.eigenfunctions[k];
        CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(count_sign_changes(psi) == k);
    }
    // a grid too small for the state leaks at the boundary
    Grid tiny{-2.0, 2.0, 301};
    GridFunction Vt = GridFunction::sample(tiny, [](double x) { return x * x; });
    SpectrumResult rt = solve_schrodinger(Vt, 3, opts);
    CHECK(!rt.meta.warnings.empty());
}

TEST_CASE("eigenvalues are strictly ascending") {
    Grid g{-9.0, 9.0, 1201};
    GridFunction V = GridFunction::sample(g, [](double x) { return 0.3 * x * x + std::sin(x); });
    SpectrumResult r = solve_schrodinger(V, 6);
    for (std::size_t i = 1; i < r.eigenvalues.size(); ++i)
        CHECK(r.eigenvalues[i] > r.eigenvalues[i - 1]);
}

TEST_CASE("k beyond grid capacity is rejected") {
    Grid g{0.0, 1.0, 5};
    GridFunction V = GridFunction::zeros(g);
    CHECK_THROWS_AS(solve_schrodinger(V, 10), std::invalid_argument);
}

TEST_CASE("weighted solve with g = 1 reduces to the plain solver") {
    Grid g{0.0, 1.0, 1201};
    GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
    GridFunction V = GridFunction::sample(g, [](double x) { return 10.0 * x; });
    SpectrumResult a = solve_weighted(one, V, 3);
    SpectrumResult b = solve_schrodinger(V, 3);
    for (int k = 0; k < 3; ++k)
        CHECK(a.eigenvalues[k] == doctest::Approx(b.eigenvalues[k]).epsilon(1e-13));
}

TEST_CASE("weighted solve equals the transformed solve exactly with analytic data") {
    const auto& ho = lookup_family("harmonic_oscillator");
    Grid g{-9.0, 9.0, 1601};
    FactorizationBundle b = partner_potentials(ho, {{1.0}}, g);
    WeightLogDerivative ld{GridFunction::sample(g, [](double x) { return -x; }),
                           GridFunction::sample(g, [](double) { return -1.0; })};
    SpectrumResult wr = solve_weighted(b.g, GridFunction::zeros(g), 5, {}, &ld);
    SpectrumResult sr = solve_schrodinger(b.v_plus, 5);
    for (int k = 0; k < 5; ++k) {
        const double denom = std::max(1.0, std::fabs(sr.eigenvalues[k]));
        CHECK(std::fabs(wr.eigenvalues[k] - sr.eigenvalues[k]) / denom < 1e-10);
    }
    // eigenvalues should be 0, 2, 4, ...
    for (int k = 0; k < 5; ++k) CHECK(std::fabs(wr.eigenvalues[k] - 2.0 * k) < 2e-3);
}

TEST_CASE("weighted eigenfunction is normalized in the weighted inner product") {
    const auto& ho = lookup_family("harmonic_oscillator");
    Grid g{-8.0, 8.0, 1201};
    FactorizationBundle b = partner_potentials(ho, {{1.0}}, g);
    WeightLogDerivative ld{GridFunction::sample(g, [](double x) { return -x; }),
                           GridFunction::sample(g, [](double) { return -1.0; })};
    SolveOptions opts;
    opts.want_vectors = true;
    SpectrumResult wr = solve_weighted(b.g, GridFunction::zeros(g), 2, opts, &ld);
    for (const auto& psi : wr.eigenfunctions)
        CHECK(norm_weighted(b.g, psi) == doctest::Approx(1.0).epsilon(1e-8));
    // the ground eigenfunction of the weighted operator is constant up to
    // the O(h²) discretization error
    const GridFunction& psi0 = wr.eigenfunctions[0];
    const double mid = psi0[g.n / 2];
    for (int i = g.n / 4; i < 3 * g.n / 4; ++i)
        CHECK(psi0[i] == doctest::Approx(mid).epsilon(1e-3));
}

TEST_CASE("partner isospectrality across the catalog") {
    struct Setup {
        const char* name;
        double a, b;
        int n, levels;
        double tol_scale;
    };
    // levels kept within each family's bound-state budget and box capacity
    const Setup setups[] = {
        {"harmonic_oscillator", -9.0, 9.0, 2001, 5, 10.0},
        {"radial_oscillator", 0.0, 10.0, 2001, 5, 10.0},
        {"coulomb", 0.0, 120.0, 6001, 2, 10.0},
        {"morse", -4.0, 22.0, 3001, 3, 10.0},
        {"poschl_teller", -12.0, 12.0, 2001, 3, 10.0},
    };
    for (const auto& s : setups) {
        const auto& fam = lookup_family(s.name);
        Grid g = make_family_grid(fam, s.a, s.b, s.n);
        FactorizationBundle b = partner_potentials(fam, fam.default_params, g);
        SpectrumResult plus = solve_schrodinger(b.v_plus, s.levels + 1);
        SpectrumResult minus = solve_schrodinger(b.v_minus, s.levels);
        // discretization error estimate from the known spectrum where available
        double err_est = 0.0;
        for (int k = 0; k <= s.levels; ++k) {
            if (fam.has_spectrum()) {
                const int mk = fam.spectrum_max ? fam.spectrum_max(fam.default_params) : -1;
                if (mk >= 0 && k > mk) break;
                err_est = std::max(err_est, std::fabs(plus.eigenvalues[k] -
                                                      fam.spectrum(fam.default_params, k)));
            }
        }
        err_est = std::max(err_est, 1e-6);
        INFO(s.name);
        for (int k = 0; k < s.levels; ++k) {
            CHECK(std::fabs(minus.eigenvalues[k] - plus.eigenvalues[k + 1]) <=
                  s.tol_scale * err_est);
        }
    }
}

TEST_CASE("log-derivative of a gaussian and pole flagging") {
    Grid g{-4.0, 4.0, 1601};
    GridFunction psi = GridFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
    GridFunction F = eigenfunction_logderivative(psi);
    CHECK(F.poles().empty());
    double worst = 0.0;
    for (int i = 2; i < g.n - 2; ++i) worst = std::max(worst, std::fabs(F[i] + g.x(i)));
    CHECK(worst < 1e-4);

    GridFunction odd = GridFunction::sample(
        g, [](double x) { return x * std::exp(-0.5 * x * x); });
    GridFunction Fo = eigenfunction_logderivative(odd);
    REQUIRE(!Fo.poles().empty());
    bool near_zero = false;
    for (int p : Fo.poles())
        if (std::fabs(g.x(p)) < 2.0 * g.h()) near_zero = true;
    CHECK(near_zero);

    // 1/x on a half-line grid has no interior pole
    Grid gh{0.5, 5.0, 501};
    GridFunction lin = GridFunction::sample(gh, [](double x) { return x; });
    GridFunction Fl = eigenfunction_logderivative(lin);
    CHECK(Fl.poles().empty());
    for (int i = 2; i < gh.n - 2; ++i)
        CHECK(Fl[i] == doctest::Approx(1.0 / gh.x(i)).epsilon(1e-6));
}

TEST_CASE("eigenvalue error decreases at second order") {
    auto err_at = [](int n) {
        Grid g{0.0, 1.0, n};
        GridFunction V = GridFunction::zeros(g);
        return std::fabs(solve_schrodinger(V, 1).eigenvalues[0] - M_PI * M_PI);
    };
    const double e1 = err_at(501), e2 = err_at(1001);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.6);
}
