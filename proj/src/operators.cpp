#include "susy/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace susy {

namespace {

void require_positive(const GridFunction& w, const char* what) {
    for (int i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) {
            throw std::invalid_argument(std::string(what) + ": weight must be positive everywhere");
        }
    }
}

GridFunction widen_poles(GridFunction out, const GridFunction& u) {
    for (int p : u.poles()) {
        out.add_pole(p - 2);
        out.add_pole(p - 1);
        out.add_pole(p);
        out.add_pole(p + 1);
        out.add_pole(p + 2);
    }
    return out;
}

}  // namespace

FactorizationBundle partner_potentials(const SuperpotentialFamily& fam, const ParameterPoint& p,
                                       const Grid& grid) {
    GridFunction w = sample_superpotential(fam, p, grid);
    GridFunction dw = sample_superpotential_derivative(fam, p, grid);
    auto [f, g] = sample_weight(fam, p, grid);
    std::vector<double> vp(grid.n), vm(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double w2 = w[i] * w[i];
        vp[i] = w2 - dw[i];
        vm[i] = w2 + dw[i];
    }
    return FactorizationBundle{GridFunction(grid, std::move(vp)), GridFunction(grid, std::move(vm)),
                               std::move(f), std::move(g), p};
}

GridFunction apply_H_plus(const GridFunction& f, const GridFunction& u) {
    require_same_grid(f, u, "apply_H_plus");
    require_positive(f, "apply_H_plus");
    const int n = u.size();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = u[i] / f[i];
    GridFunction inner = derivative(GridFunction(u.grid(), std::move(r)));
    for (int i = 0; i < n; ++i) inner[i] *= f[i] * f[i];
    GridFunction outer = derivative(inner);
    for (int i = 0; i < n; ++i) outer[i] = -outer[i] / f[i];
    return widen_poles(std::move(outer), u);
}

GridFunction apply_H_minus(const GridFunction& f, const GridFunction& u) {
    require_same_grid(f, u, "apply_H_minus");
    require_positive(f, "apply_H_minus");
    const int n = u.size();
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = f[i] * u[i];
    GridFunction inner = derivative(GridFunction(u.grid(), std::move(s)));
    for (int i = 0; i < n; ++i) inner[i] /= f[i] * f[i];
    GridFunction outer = derivative(inner);
    for (int i = 0; i < n; ++i) outer[i] = -outer[i] * f[i];
    return widen_poles(std::move(outer), u);
}

GridFunction apply_L1(const GridFunction& g, const GridFunction& u) {
    require_same_grid(g, u, "apply_L1");
    require_positive(g, "apply_L1");
    const int n = u.size();
    GridFunction inner = derivative(u);
    for (int i = 0; i < n; ++i) inner[i] *= g[i];
    GridFunction outer = derivative(inner);
    for (int i = 0; i < n; ++i) outer[i] = -outer[i] / g[i];
    return widen_poles(std::move(outer), u);
}

GridFunction apply_L2(const GridFunction& g, const GridFunction& u) {
    require_same_grid(g, u, "apply_L2");
    require_positive(g, "apply_L2");
    const int n = u.size();
    GridFunction inner = derivative(u);
    for (int i = 0; i < n; ++i) inner[i] /= g[i];
    GridFunction outer = derivative(inner);
    for (int i = 0; i < n; ++i) outer[i] = -outer[i] * g[i];
    return widen_poles(std::move(outer), u);
}

SimilarityReport similarity_residual(const GridFunction& f, const GridFunction& u) {
    require_same_grid(f, u, "similarity_residual");
    require_positive(f, "similarity_residual");
    const int n = u.size();
    std::vector<double> gv(n), fu(n), uf(n);
    for (int i = 0; i < n; ++i) {
        gv[i] = f[i] * f[i];
        fu[i] = f[i] * u[i];
        uf[i] = u[i] / f[i];
    }
    const GridFunction g(u.grid(), std::move(gv));

    GridFunction lhs1 = apply_L1(g, u);
    GridFunction rhs1 = apply_H_plus(f, GridFunction(u.grid(), std::move(fu)));
    std::vector<double> d1(n);
    for (int i = 0; i < n; ++i) d1[i] = lhs1[i] - rhs1[i] / f[i];

    GridFunction lhs2 = apply_L2(g, u);
    GridFunction rhs2 = apply_H_minus(f, GridFunction(u.grid(), std::move(uf)));
    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i) d2[i] = lhs2[i] - rhs2[i] * f[i];

    SimilarityReport rep;
    rep.l1_side = residual_report(GridFunction(u.grid(), std::move(d1)));
    rep.l2_side = residual_report(GridFunction(u.grid(), std::move(d2)));
    return rep;
}

ResidualReport h_plus_consistency(const GridFunction& f, const GridFunction& u,
                                  const GridFunction& v_plus) {
    require_same_grid(f, u, "h_plus_consistency");
    require_same_grid(u, v_plus, "h_plus_consistency");
    GridFunction nested = apply_H_plus(f, u);
    GridFunction upp = second_difference(u);
    const int n = u.size();
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = nested[i] - (-upp[i] + v_plus[i] * u[i]);
    return residual_report(GridFunction(u.grid(), std::move(d)));
}

std::pair<ResidualReport, double> shape_invariance_residual_pair(
    const SuperpotentialFamily& fam, const ParameterPoint& p, const ParameterPoint& mu,
    const Grid& grid) {
    FactorizationBundle at_p = partner_potentials(fam, p, grid);
    FactorizationBundle at_mu = partner_potentials(fam, mu, grid);
    std::vector<double> d(grid.n);
    for (int i = 0; i < grid.n; ++i) d[i] = at_p.v_minus[i] - at_mu.v_plus[i];
    GridFunction diff(grid, std::move(d));
    const double c = masked_mean(diff);
    return {residual_report_against(diff, c), c};
}

std::pair<ResidualReport, double> base_shape_invariance_residual(
    const SuperpotentialFamily& fam, const ParameterPoint& p, const Grid& grid) {
    return shape_invariance_residual_pair(fam, p, fam.shift(p), grid);
}

}  // namespace susy
