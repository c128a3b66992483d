#include "susy/deformation.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace susy {

void DeformationProblem::validate() const {
    if (u0 == 0.0 && du0 == 0.0)
        throw std::invalid_argument("deformation: seed (u0, du0) must not be (0, 0)");
    const Grid& g = W.grid();
    if (x0 < g.a || x0 > g.b)
        throw std::invalid_argument("deformation: x0 must lie inside the grid");
}

ResidualReport chi_residual(const GridFunction& chi, const DeformationProblem& problem,
                            ResidualOptions opts) {
    require_same_grid(chi, problem.W, "chi_residual");
    const double s = problem.sign == DeformationSign::plus ? 1.0 : -1.0;
    GridFunction dchi = derivative(chi);
    const int n = chi.size();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = chi[i] * chi[i] + s * 2.0 * problem.W[i] * chi[i] + dchi[i] + problem.K;
    }
    GridFunction res(chi.grid(), std::move(r));
    res.merge_poles(dchi.poles());
    return residual_report(res, opts);
}

namespace {

struct State {
    double u, du;
};

}  // namespace

GridFunction solve_chi(const DeformationProblem& problem, const Grid& grid) {
    problem.validate();
    grid.validate();
    const double s = problem.sign == DeformationSign::plus ? 1.0 : -1.0;
    const double K = problem.K;

    auto w_at = [&](double x) {
        if (problem.w_sampler) return problem.w_sampler(x);
        return interpolate_cubic(problem.W, x);
    };
    // u'' = -(s 2W) u' - K u
    auto rhs = [&](double x, State y) {
        return State{y.du, -s * 2.0 * w_at(x) * y.du - K * y.u};
    };
    auto rk4_step = [&](double x, State y, double step) {
        const State k1 = rhs(x, y);
        const State k2 = rhs(x + 0.5 * step, {y.u + 0.5 * step * k1.u, y.du + 0.5 * step * k1.du});
        const State k3 = rhs(x + 0.5 * step, {y.u + 0.5 * step * k2.u, y.du + 0.5 * step * k2.du});
        const State k4 = rhs(x + step, {y.u + step * k3.u, y.du + step * k3.du});
        return State{y.u + step / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
                     y.du + step / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du)};
    };

    const double h = grid.h();
    // snap the seed to the nearest grid point
    int i0 = static_cast<int>(std::llround((problem.x0 - grid.a) / h));
    i0 = std::max(0, std::min(grid.n - 1, i0));

    std::vector<double> u(grid.n, 0.0), du(grid.n, 0.0);
    u[i0] = problem.u0;
    du[i0] = problem.du0;

    constexpr double kBlowup = 1e280;
    auto guard = [&](const State& y, double x) {
        if (!std::isfinite(y.u) || !std::isfinite(y.du) || std::fabs(y.u) > kBlowup ||
            std::fabs(y.du) > kBlowup) {
            std::ostringstream os;
            os << "solve_chi: integration blow-up; last valid x = " << x;
            throw std::runtime_error(os.str());
        }
    };

    State y{problem.u0, problem.du0};
    for (int i = i0; i + 1 < grid.n; ++i) {
        y = rk4_step(grid.x(i), y, h);
        guard(y, grid.x(i));
        u[i + 1] = y.u;
        du[i + 1] = y.du;
    }
    y = {problem.u0, problem.du0};
    for (int i = i0; i > 0; --i) {
        y = rk4_step(grid.x(i), y, -h);
        guard(y, grid.x(i));
        u[i - 1] = y.u;
        du[i - 1] = y.du;
    }

    std::vector<double> chi(grid.n);
    for (int i = 0; i < grid.n; ++i) chi[i] = u[i] != 0.0 ? du[i] / u[i] : 0.0;
    GridFunction out(grid, std::move(chi));
    for (int i = 0; i < grid.n; ++i) {
        if (u[i] == 0.0) out.add_pole(i);
        if (i + 1 < grid.n && u[i] * u[i + 1] < 0.0)
            out.add_pole(std::fabs(u[i]) <= std::fabs(u[i + 1]) ? i : i + 1);
    }
    return out;
}

RouteComparison route_equivalence(const GridFunction& chi, const GridFunction& F_xi, double alpha,
                                  ResidualOptions opts) {
    if (alpha == 0.0) throw std::invalid_argument("route_equivalence: alpha must be nonzero");
    const Grid& gx = chi.grid();
    const Grid& gxi = F_xi.grid();
    RouteComparison cmp;
    cmp.scale = alpha;  // d/dx = alpha d/dxi maps F(xi) to alpha F(alpha x)

    std::vector<double> d(gx.n, 0.0);
    GridFunction diff(gx, std::move(d));
    for (int i = 0; i < gx.n; ++i) {
        const double xi = alpha * gx.x(i);
        if (xi < gxi.a || xi > gxi.b) {
            diff.add_pole(i);  // outside the xi sample: excluded
            continue;
        }
        // skip xi points inside F's pole windows
        const double hxi = gxi.h();
        const int j = static_cast<int>(std::llround((xi - gxi.a) / hxi));
        if (F_xi.near_pole(j, opts.pole_window)) {
            diff.add_pole(i);
            continue;
        }
        diff[i] = chi[i] - alpha * interpolate_cubic(F_xi, xi);
    }
    for (int p : chi.poles()) diff.add_pole(p);
    ResidualReport rep = residual_report(diff, opts);
    cmp.report = rep;
    cmp.points_compared = rep.points_used;
    return cmp;
}

}  // namespace susy
