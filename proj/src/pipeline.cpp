#include "susy/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace susy {

std::string branch_name(Branch b) { return b == Branch::L1 ? "L1" : "L2"; }

void ExtensionConfig::validate() const {
    if (alpha == 0.0) throw std::invalid_argument("extension: alpha must be nonzero (mu != lambda)");
    if (eigenindex < 0) throw std::invalid_argument("extension: eigenindex must be >= 0");
    lookup_family(family);
}

std::string ExtensionNode::branch_path() const {
    if (stage == 0) return "root";
    std::vector<std::string> parts;
    const ExtensionNode* cur = this;
    while (cur && cur->stage > 0) {
        parts.push_back(branch_name(cur->branch));
        cur = cur->parent.get();
    }
    std::string path;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!path.empty()) path += "/";
        path += *it;
    }
    return path;
}

namespace {

ParameterPoint resolve_params(const ExtensionConfig& cfg, const SuperpotentialFamily& fam) {
    return cfg.base_params.values.empty() ? fam.default_params : cfg.base_params;
}

void check_eigenindex(const SuperpotentialFamily& fam, const ParameterPoint& p, int k) {
    if (fam.spectrum_max) {
        const int m = fam.spectrum_max(p);
        if (m >= 0 && k > m)
            throw std::invalid_argument("eigenindex " + std::to_string(k) +
                                        " out of range for family " + fam.name);
    }
}

void normalize_sign(GridFunction& u) {
    double amax = 0.0;
    for (int i = 0; i < u.size(); ++i) amax = std::max(amax, std::fabs(u[i]));
    const double nrm = norm(u);
    for (int i = 0; i < u.size(); ++i) u[i] /= nrm;
    for (int i = 0; i < u.size(); ++i) {
        if (std::fabs(u[i]) > 1e-8 * amax) {
            if (u[i] < 0.0)
                for (int j = 0; j < u.size(); ++j) u[j] = -u[j];
            break;
        }
    }
}

}  // namespace

std::pair<GridFunction, double> build_phi(const ExtensionConfig& cfg, const Grid& grid_xi) {
    cfg.validate();
    const SuperpotentialFamily& fam = lookup_family(cfg.family);
    const ParameterPoint p = resolve_params(cfg, fam);
    fam.validate_params(p);
    check_eigenindex(fam, p, cfg.eigenindex);

    if (fam.has_analytic_eigenfunctions(cfg.eigenindex)) {
        GridFunction phi = GridFunction::sample(
            grid_xi, [&](double xi) { return fam.phi(xi, p, cfg.eigenindex); });
        normalize_sign(phi);
        return {std::move(phi), fam.spectrum(p, cfg.eigenindex)};
    }

    GridFunction vplus = GridFunction::sample(grid_xi, [&](double xi) {
        const double w = fam.w(xi, p);
        return w * w - fam.dw(xi, p);
    });
    SolveOptions opts;
    opts.want_vectors = true;
    SpectrumResult res = solve_schrodinger(vplus, cfg.eigenindex + 1, opts);
    if (!res.meta.warnings.empty())
        throw std::runtime_error("build_phi: " + res.meta.warnings.front() +
                                 " (grid too small for this eigenindex)");
    return {res.eigenfunctions[cfg.eigenindex], res.eigenvalues[cfg.eigenindex]};
}

GridFunction build_F(const GridFunction& phi, const GridFunction& f) {
    require_same_grid(phi, f, "build_F");
    GridFunction psi = divide(phi, f);
    return eigenfunction_logderivative(psi);
}

ResidualReport constraint_residual_F(const GridFunction& F, const GridFunction& g_bar, double c,
                                     ResidualOptions opts) {
    require_same_grid(F, g_bar, "constraint_residual_F");
    GridFunction gF = multiply(g_bar, F);
    GridFunction dgF = derivative(gF);
    const int n = F.size();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = F[i] * F[i] + dgF[i] / g_bar[i] - c;
    GridFunction res(F.grid(), std::move(r));
    res.merge_poles(dgF.poles());
    return residual_report(res, opts);
}

ResidualReport constraint_residual_F_analytic(const GridFunction& F, const GridFunction& dF,
                                              const GridFunction& glog, double c,
                                              ResidualOptions opts) {
    require_same_grid(F, dF, "constraint_residual_F_analytic");
    require_same_grid(F, glog, "constraint_residual_F_analytic");
    const int n = F.size();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = F[i] * F[i] + dF[i] + glog[i] * F[i] - c;
    GridFunction res(F.grid(), std::move(r));
    res.merge_poles(F.poles());
    res.merge_poles(dF.poles());
    return residual_report(res, opts);
}

namespace {

/// (1/g) D(g W~) for W~ = lambda F, assembled from dF and g'/g.
GridFunction weighted_div(const GridFunction& F, const GridFunction& g, double lambda,
                          const GridFunction* dF, const GridFunction* glog) {
    GridFunction d = dF ? *dF : derivative(F);
    const int n = F.size();
    std::vector<double> out(n);
    if (glog) {
        for (int i = 0; i < n; ++i) out[i] = lambda * (d[i] + (*glog)[i] * F[i]);
    } else {
        GridFunction dg = derivative(g);
        for (int i = 0; i < n; ++i) out[i] = lambda * (d[i] + dg[i] / g[i] * F[i]);
    }
    GridFunction r(F.grid(), std::move(out));
    r.merge_poles(F.poles());
    r.merge_poles(d.poles());
    return r;
}

}  // namespace

std::pair<GridFunction, GridFunction> nextgen_partners(const GridFunction& F,
                                                       const GridFunction& g, double lambda,
                                                       const GridFunction* dF,
                                                       const GridFunction* glog) {
    require_same_grid(F, g, "nextgen_partners");
    GridFunction div1 = weighted_div(F, g, 1.0, dF, glog);
    const int n = F.size();
    std::vector<double> vp(n), vm(n);
    for (int i = 0; i < n; ++i) {
        const double w2 = lambda * lambda * F[i] * F[i];
        vp[i] = w2 + lambda * div1[i];
        vm[i] = w2 - lambda * div1[i];
    }
    GridFunction plus(F.grid(), std::move(vp));
    GridFunction minus(F.grid(), std::move(vm));
    plus.merge_poles(div1.poles());
    minus.merge_poles(div1.poles());
    return {std::move(plus), std::move(minus)};
}

std::pair<ResidualReport, double> gennext_si_residual(const GridFunction& F, const GridFunction& g,
                                                      double lambda, double mu,
                                                      const GridFunction* dF,
                                                      const GridFunction* glog,
                                                      ResidualOptions opts) {
    require_same_grid(F, g, "gennext_si_residual");
    GridFunction div1 = weighted_div(F, g, 1.0, dF, glog);
    const int n = F.size();
    // d(x) = [W~^2(lambda) - (1/g)(g W~(lambda))'] - [W~^2(mu) + (1/g)(g W~(mu))']
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
        d[i] = (lambda * lambda - mu * mu) * F[i] * F[i] - (lambda + mu) * div1[i];
    }
    GridFunction diff(F.grid(), std::move(d));
    diff.merge_poles(div1.poles());
    const double c = masked_mean(diff, opts);
    return {residual_report_against(diff, c, opts), c};
}

ResidualReport qhj_residual(const GridFunction& omega_prime, const GridFunction& g,
                            const GridFunction& v_tilde, double E, ResidualOptions opts) {
    require_same_grid(omega_prime, g, "qhj_residual");
    require_same_grid(omega_prime, v_tilde, "qhj_residual");
    GridFunction gw = multiply(g, omega_prime);
    GridFunction dgw = derivative(gw);
    const int n = omega_prime.size();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = omega_prime[i] * omega_prime[i] + dgw[i] / g[i] - v_tilde[i] + E;
    }
    GridFunction res(omega_prime.grid(), std::move(r));
    res.merge_poles(dgw.poles());
    return residual_report(res, opts);
}

namespace {

ResidualOptions node_residual_opts(const ExtensionConfig& cfg, const Grid& grid) {
    ResidualOptions opts = cfg.residual_opts;
    if (cfg.pole_window_x > 0.0) {
        opts.pole_window =
            std::max(opts.pole_window, static_cast<int>(std::ceil(cfg.pole_window_x / grid.h())));
    }
    return opts;
}

bool has_interior_sign_pole(const GridFunction& psi, int margin) {
    for (int i = margin; i < psi.size() - margin - 1; ++i) {
        if (psi[i] * psi[i + 1] < 0.0) return true;
    }
    return false;
}

}  // namespace

NodePtr make_root(const ExtensionConfig& cfg, const Grid& grid) {
    cfg.validate();
    const SuperpotentialFamily& fam = lookup_family(cfg.family);
    const ParameterPoint p = resolve_params(cfg, fam);
    fam.validate_params(p);

    auto node = std::make_shared<ExtensionNode>();
    node->stage = 0;
    node->branch = Branch::L1;
    node->params = ParameterPoint{{p[fam.shift_index]}};
    node->lambda = cfg.lambda;
    node->mu = cfg.mu();
    GridFunction w = sample_superpotential(fam, p, grid);
    GridFunction dw = sample_superpotential_derivative(fam, p, grid);
    auto [f, g] = sample_weight(fam, p, grid);
    node->weight = g;
    node->seed_psi = f;
    node->F = GridFunction::zeros(grid);
    std::vector<double> s1(grid.n), t(grid.n), vt2(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        s1[i] = -w[i];
        t[i] = w[i] * w[i] - dw[i];  // zero-mode side of the base pair
        vt2[i] = 2.0 * dw[i];        // offset to the partner side
    }
    node->weight_logderiv = GridFunction(grid, std::move(s1));
    node->schrodinger_potential = GridFunction(grid, std::move(t));
    // Branch offsets: L1 seeds T + 0, L2 seeds T + 2W' (the partner form).
    node->v_tilde_minus = GridFunction::zeros(grid);
    node->v_tilde_plus = GridFunction(grid, std::move(vt2));
    return node;
}

NodePtr make_stage1_node(const ExtensionConfig& cfg, const Grid& grid) {
    cfg.validate();
    if (cfg.branch == Branch::L2) {
        // the partner-seeded route goes through the generic tree machinery
        auto [l1, l2] = extend_stage(make_root(cfg, grid), cfg);
        return l2;
    }
    const SuperpotentialFamily& fam = lookup_family(cfg.family);
    const ParameterPoint p = resolve_params(cfg, fam);
    const double alpha = cfg.alpha;

    // the shape-function constraint lives in xi = alpha*x; build the seed
    // there on a grid commensurate with the x-grid (no interpolation).
    const bool reversed = alpha < 0.0;
    Grid grid_xi{reversed ? alpha * grid.b : alpha * grid.a,
                 reversed ? alpha * grid.a : alpha * grid.b, grid.n};
    auto xi_index = [&](int i) { return reversed ? grid.n - 1 - i : i; };

    auto node = std::make_shared<ExtensionNode>();
    node->stage = 1;
    node->branch = Branch::L1;
    node->params = ParameterPoint{{cfg.lambda, cfg.mu()}};
    node->lambda = cfg.lambda;
    node->mu = cfg.mu();
    node->parent = make_root(cfg, grid);

    const ResidualOptions opts = node_residual_opts(cfg, grid);

    GridFunction F_x = GridFunction::zeros(grid);
    GridFunction dF_x = GridFunction::zeros(grid);
    GridFunction psi_x = GridFunction::zeros(grid);

    if (fam.has_analytic_eigenfunctions(cfg.eigenindex)) {
        check_eigenindex(fam, p, cfg.eigenindex);
        node->K = fam.spectrum(p, cfg.eigenindex);
        // psi = phi/f gives F = phi'/phi + W; differentiating once more and
        // using the eigenvalue equation, F' = 2WF - F^2 - K. All closed form.
        GridFunction F_xi = GridFunction::zeros(grid_xi);
        GridFunction dF_xi = GridFunction::zeros(grid_xi);
        GridFunction glog_xi = GridFunction::zeros(grid_xi);
        for (int j = 0; j < grid.n; ++j) {
            const double xi = grid_xi.x(j);
            const double phv = fam.phi(xi, p, cfg.eigenindex);
            const double wv = fam.w(xi, p);
            const double Fv = fam.dphi(xi, p, cfg.eigenindex) / phv + wv;
            F_xi[j] = Fv;
            dF_xi[j] = 2.0 * wv * Fv - Fv * Fv - node->K;
            glog_xi[j] = -2.0 * wv;
        }
        for (int i = 0; i < grid.n; ++i) {
            const int j = xi_index(i);
            F_x[i] = F_xi[j];
            dF_x[i] = alpha * dF_xi[j];
            psi_x[i] = fam.phi(grid_xi.x(j), p, cfg.eigenindex) *
                       std::exp(-fam.log_f(grid_xi.x(j), p));
        }
        // poles where psi (equivalently phi) changes sign
        for (int i = 0; i + 1 < grid.n; ++i) {
            if (psi_x[i] * psi_x[i + 1] < 0.0) {
                const int q = std::fabs(psi_x[i]) <= std::fabs(psi_x[i + 1]) ? i : i + 1;
                F_x.add_pole(q);
                dF_x.add_pole(q);
                psi_x.add_pole(q);
                F_xi.add_pole(xi_index(q));
                dF_xi.add_pole(xi_index(q));
            }
        }
        node->constraint = constraint_residual_F_analytic(F_xi, dF_xi, glog_xi, -node->K, opts);
    } else {
        auto [phi, K] = build_phi(cfg, grid_xi);
        node->K = K;
        GridFunction f_xi = GridFunction::sample(
            grid_xi, [&](double xi) { return std::exp(fam.log_f(xi, p)); });
        GridFunction F_xi = build_F(phi, f_xi);
        GridFunction psi_xi = divide(phi, f_xi);
        GridFunction g_xi = multiply(f_xi, f_xi);
        node->constraint = constraint_residual_F(F_xi, g_xi, -node->K, opts);
        GridFunction dF_xi = derivative(F_xi);
        for (int i = 0; i < grid.n; ++i) {
            const int j = xi_index(i);
            F_x[i] = F_xi[j];
            dF_x[i] = alpha * dF_xi[j];
            psi_x[i] = psi_xi[j];
        }
        for (int q : F_xi.poles()) {
            F_x.add_pole(xi_index(q));
            dF_x.add_pole(xi_index(q));
            psi_x.add_pole(xi_index(q));
        }
    }

    // partner potentials and shape-invariance certificate in the x frame
    GridFunction gw = sample_weight(fam, p, grid).second;
    GridFunction glog_x =
        GridFunction::sample(grid, [&](double x) { return -2.0 * fam.w(x, p); });
    auto [vtp, vtm] = nextgen_partners(F_x, gw, cfg.lambda, &dF_x, &glog_x);
    node->v_tilde_plus = std::move(vtp);
    node->v_tilde_minus = std::move(vtm);
    auto [sirep, sic] =
        gennext_si_residual(F_x, gw, cfg.lambda, cfg.mu(), &dF_x, &glog_x, opts);
    node->si = sirep;
    node->si_constant = sic;

    node->F = std::move(F_x);
    node->seed_psi = std::move(psi_x);
    node->weight = gw;
    node->weight_logderiv =
        GridFunction::sample(grid, [&](double x) { return -fam.w(x, p); });
    GridFunction w_s = sample_superpotential(fam, p, grid);
    GridFunction dw_s = sample_superpotential_derivative(fam, p, grid);
    std::vector<double> t(grid.n);
    for (int i = 0; i < grid.n; ++i) t[i] = w_s[i] * w_s[i] - dw_s[i];
    node->schrodinger_potential = GridFunction(grid, std::move(t));
    node->singular = has_interior_sign_pole(node->seed_psi, opts.margin);
    return node;
}

std::pair<NodePtr, NodePtr> extend_stage(const NodePtr& node, const ExtensionConfig& cfg) {
    cfg.validate();
    if (!node) throw std::invalid_argument("extend_stage: null node");
    const Grid grid = node->weight.grid();
    const ResidualOptions opts = node_residual_opts(cfg, grid);
    const int k = cfg.eigenindex;
    const double alpha = cfg.alpha;

    auto build_child = [&](Branch br) -> NodePtr {
        auto child = std::make_shared<ExtensionNode>();
        child->stage = node->stage + 1;
        child->branch = br;
        child->parent = node;
        child->lambda = cfg.lambda;
        child->mu = cfg.mu();
        if (node->stage == 0) {
            child->params = ParameterPoint{{cfg.lambda, cfg.mu()}};
        } else {
            child->params = node->params;
            child->params.values.push_back(cfg.lambda);
            child->params.values.push_back(cfg.mu());
        }

        // seed operator of this branch, in the transformed frame
        const GridFunction& vt = br == Branch::L1 ? node->v_tilde_minus : node->v_tilde_plus;
        std::vector<double> vseed(grid.n);
        for (int i = 0; i < grid.n; ++i) vseed[i] = node->schrodinger_potential[i] + vt[i];
        GridFunction V(grid, std::move(vseed));

        SolveOptions sopts;
        sopts.want_vectors = true;
        SpectrumResult res = solve_schrodinger(V, k + 1, sopts);
        for (const auto& wmsg : res.meta.warnings)
            child->diagnostics.push_back(branch_name(br) + ": " + wmsg);
        const GridFunction& w0 = res.eigenfunctions[0];
        const GridFunction& wk = res.eigenfunctions[k];
        const double E0 = res.eigenvalues[0];
        child->K = res.eigenvalues[k] - E0;

        // psi ratio; the weight divisions cancel so w_k/w_0 is the
        // eigenfunction ratio of the weighted operator directly
        double w0max = 0.0;
        for (int i = 0; i < grid.n; ++i) w0max = std::max(w0max, std::fabs(w0[i]));
        const double floor_v = 1e-12 * w0max;
        std::vector<double> ratio(grid.n, 0.0);
        std::vector<int> tail;
        for (int i = 0; i < grid.n; ++i) {
            if (std::fabs(w0[i]) > floor_v)
                ratio[i] = wk[i] / w0[i];
            else
                tail.push_back(i);
        }
        GridFunction psi(grid, std::move(ratio));
        for (int i : tail) psi.add_pole(i);
        GridFunction F1 = eigenfunction_logderivative(psi);
        child->singular = false;
        for (int i = opts.margin; i + 1 < grid.n - opts.margin; ++i) {
            if (psi.near_pole(i, 0)) continue;
            if (psi[i] * psi[i + 1] < 0.0 && !psi.near_pole(i + 1, 0)) child->singular = true;
        }

        // alpha-frame shape function
        std::vector<double> fvals(grid.n);
        for (int i = 0; i < grid.n; ++i) fvals[i] = F1[i] / alpha;
        GridFunction F(grid, std::move(fvals));
        F.merge_poles(F1.poles());

        // child weight is the squared ground eigenvector of the seed solve
        std::vector<double> gw(grid.n), s1(grid.n), t(grid.n);
        GridFunction s1f = eigenfunction_logderivative(w0);
        for (int i = 0; i < grid.n; ++i) {
            gw[i] = w0[i] * w0[i];
            s1[i] = s1f[i];
            t[i] = V[i] - E0;
        }
        child->weight = GridFunction(grid, std::move(gw));
        for (int i : tail) child->weight.add_pole(i);
        child->weight_logderiv = GridFunction(grid, std::move(s1));
        child->weight_logderiv.merge_poles(s1f.poles());
        child->schrodinger_potential = GridFunction(grid, std::move(t));

        std::vector<double> glogv(grid.n);
        for (int i = 0; i < grid.n; ++i) glogv[i] = 2.0 * child->weight_logderiv[i];
        GridFunction glog(grid, std::move(glogv));
        glog.merge_poles(child->weight_logderiv.poles());

        auto [vtp, vtm] = nextgen_partners(F, child->weight, cfg.lambda, nullptr, &glog);
        child->v_tilde_plus = std::move(vtp);
        child->v_tilde_minus = std::move(vtm);

        // certificates: the constraint in the alpha frame has constant -K/alpha^2
        {
            GridFunction dF = derivative(F);
            GridFunction r = GridFunction::zeros(grid);
            for (int i = 0; i < grid.n; ++i)
                r[i] = F[i] * F[i] + (dF[i] + glog[i] * F[i]) / alpha -
                       (-child->K / (alpha * alpha));
            r.merge_poles(F.poles());
            r.merge_poles(dF.poles());
            r.merge_poles(glog.poles());
            child->constraint = residual_report(r, opts);
        }
        auto [sirep, sic] =
            gennext_si_residual(F, child->weight, cfg.lambda, cfg.mu(), nullptr, &glog, opts);
        child->si = sirep;
        child->si_constant = sic;

        child->F = std::move(F);
        child->seed_psi = std::move(psi);
        return child;
    };

    return {build_child(Branch::L1), build_child(Branch::L2)};
}

std::vector<NodePtr> extend_tree(const NodePtr& root, const ExtensionConfig& cfg, int stages) {
    if (stages < 0) throw std::invalid_argument("extend_tree: stages must be >= 0");
    std::vector<NodePtr> level{root};
    for (int s = 0; s < stages; ++s) {
        std::vector<NodePtr> next;
        next.reserve(level.size() * 2);
        for (const auto& n : level) {
            auto [a, b] = extend_stage(n, cfg);
            next.push_back(a);
            next.push_back(b);
        }
        level = std::move(next);
    }
    return level;
}

}  // namespace susy
