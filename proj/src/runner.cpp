#include "susy/runner.hpp"

#include "susy/analysis.hpp"
#include "susy/deformation.hpp"
#include "susy/family.hpp"
#include "susy/operators.hpp"
#include "susy/pipeline.hpp"
#include "susy/report_io.hpp"
#include "susy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace susy {

namespace {

namespace fs = std::filesystem;

struct RunContext {
    RunConfig cfg;
    fs::path out;
    ReportWriter report;
    bool tolerance_exceeded = false;

    const SuperpotentialFamily& family() const { return lookup_family(cfg.family); }
    ParameterPoint params() const {
        return cfg.family_params.empty() ? family().default_params
                                         : ParameterPoint{cfg.family_params};
    }
    Grid grid() const { return make_family_grid(family(), cfg.grid.a, cfg.grid.b, cfg.grid.n); }
    ResidualOptions residual_opts(const Grid& g) const {
        ResidualOptions o;
        o.margin = cfg.margin;
        o.pole_window = std::max(5, static_cast<int>(std::ceil(cfg.pole_window / g.h())));
        return o;
    }
    ExtensionConfig extension_config() const {
        ExtensionConfig e;
        e.family = cfg.family;
        e.base_params = ParameterPoint{cfg.family_params};
        e.lambda = cfg.lambda;
        e.alpha = cfg.alpha;
        e.eigenindex = cfg.eigenindex;
        e.residual_opts.margin = cfg.margin;
        e.pole_window_x = cfg.pole_window;
        return e;
    }

    void gate_residual(const std::string& name, double value, double tol) {
        report.add(name + ".tolerance", tol);
        report.add(name + ".within_tolerance", value <= tol);
        if (!(value <= tol)) tolerance_exceeded = true;
    }

    std::string table_path(const std::string& name) const { return (out / name).string(); }
};

void echo_config(RunContext& ctx) {
    std::istringstream cfg_lines(serialize_config(ctx.cfg));
    std::string line;
    while (std::getline(cfg_lines, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos)
            ctx.report.add("config." + line.substr(0, eq), line.substr(eq + 3));
    }
}

void run_catalog(RunContext& ctx) {
    const auto names = family_names();
    ctx.report.add("families", static_cast<int>(names.size()));
    int idx = 0;
    for (const auto& name : names) {
        const auto& fam = lookup_family(name);
        const std::string p = "family." + std::to_string(idx++);
        ctx.report.add(p + ".name", fam.name);
        std::ostringstream dom;
        dom << (std::isfinite(fam.domain.lo) ? format_double(fam.domain.lo) : std::string("-inf"))
            << " .. "
            << (std::isfinite(fam.domain.hi) ? format_double(fam.domain.hi) : std::string("inf"));
        ctx.report.add(p + ".domain", dom.str());
        std::ostringstream pn;
        for (std::size_t i = 0; i < fam.parameter_names.size(); ++i) {
            if (i) pn << ", ";
            pn << fam.parameter_names[i];
        }
        ctx.report.add(p + ".parameters", pn.str());
        std::ostringstream dv;
        for (std::size_t i = 0; i < fam.default_params.size(); ++i) {
            if (i) dv << ", ";
            dv << format_double(fam.default_params[i]);
        }
        ctx.report.add(p + ".defaults", dv.str());
        ctx.report.add(p + ".shift_parameter", fam.parameter_names[fam.shift_index]);
        ctx.report.add(p + ".spectrum", fam.has_spectrum() ? fam.spectrum_text : "none");
        ctx.report.add(p + ".analytic_eigenfunctions",
                       fam.analytic_eigen_max >= 0 ? "k <= " + std::to_string(fam.analytic_eigen_max)
                                                   : "none");
    }
}

void run_factorize(RunContext& ctx) {
    const Grid g = ctx.grid();
    const auto& fam = ctx.family();
    const ParameterPoint p = ctx.params();
    FactorizationBundle b = partner_potentials(fam, p, g);
    write_table(ctx.table_path("v_plus.table"), "v_plus", b.v_plus);
    write_table(ctx.table_path("v_minus.table"), "v_minus", b.v_minus);
    write_table(ctx.table_path("f.table"), "f", b.f);
    write_table(ctx.table_path("g.table"), "g", b.g);
    auto [rep, c] = base_shape_invariance_residual(fam, p, g);
    ctx.report.add("base_si.constant", c);
    ctx.report.add_residual("base_si", rep);
    ctx.gate_residual("base_si", rep.max_abs, ctx.cfg.tolerances.residual);
}

SolveOptions schrodinger_options(const RunContext& ctx, std::function<double(double)> sampler) {
    SolveOptions o;
    o.richardson = ctx.cfg.solver.richardson;
    o.potential_sampler = std::move(sampler);
    return o;
}

void run_spectrum(RunContext& ctx) {
    const Grid g = ctx.grid();
    const auto& fam = ctx.family();
    const ParameterPoint p = ctx.params();
    FactorizationBundle b = partner_potentials(fam, p, g);
    const int k = ctx.cfg.solver.k_levels;

    auto vp_fn = [&](double x) {
        const double w = fam.w(x, p);
        return w * w - fam.dw(x, p);
    };
    auto vm_fn = [&](double x) {
        const double w = fam.w(x, p);
        return w * w + fam.dw(x, p);
    };
    SpectrumResult plus = solve_schrodinger(b.v_plus, k + 1, schrodinger_options(ctx, vp_fn));
    SpectrumResult minus = solve_schrodinger(b.v_minus, k, schrodinger_options(ctx, vm_fn));

    std::vector<double> idx_p(plus.eigenvalues.size()), idx_m(minus.eigenvalues.size());
    for (std::size_t i = 0; i < idx_p.size(); ++i) idx_p[i] = static_cast<double>(i);
    for (std::size_t i = 0; i < idx_m.size(); ++i) idx_m[i] = static_cast<double>(i);
    write_table(ctx.table_path("spectrum_plus.table"), {"index", "eigenvalue"},
                {idx_p, plus.eigenvalues});
    write_table(ctx.table_path("spectrum_minus.table"), {"index", "eigenvalue"},
                {idx_m, minus.eigenvalues});

    for (std::size_t i = 0; i < plus.eigenvalues.size(); ++i)
        ctx.report.add("spectrum_plus." + std::to_string(i), plus.eigenvalues[i]);
    for (std::size_t i = 0; i < minus.eigenvalues.size(); ++i)
        ctx.report.add("spectrum_minus." + std::to_string(i), minus.eigenvalues[i]);
    if (fam.has_spectrum()) {
        for (int i = 0; i <= k; ++i) {
            const int mk = fam.spectrum_max ? fam.spectrum_max(p) : -1;
            if (mk >= 0 && i > mk) break;
            ctx.report.add("spectrum_exact." + std::to_string(i), fam.spectrum(p, i));
        }
    }

    SpectralMatch match =
        isospectral_compare(plus.eigenvalues, minus.eigenvalues, MatchMode::drop_lowest_a,
                            10.0 * std::max(ctx.cfg.tolerances.spectral, 1e-12));
    ctx.report.add("match.shift", match.shift);
    ctx.report.add("match.pairs", static_cast<int>(match.pairs.size()));
    ctx.report.add("match.unmatched_a", static_cast<int>(match.unmatched_a.size()));
    ctx.report.add("match.unmatched_b", static_cast<int>(match.unmatched_b.size()));
    double worst = 0.0;
    for (const auto& pr : match.pairs) worst = std::max(worst, pr.gap);
    ctx.report.add("match.max_gap", worst);
    ctx.gate_residual("match", worst, ctx.cfg.tolerances.spectral);
}

std::string node_file_stem(const ExtensionNode& node) {
    std::string path = node.branch_path();
    std::replace(path.begin(), path.end(), '/', '_');
    return "node_" + path;
}

void report_node(RunContext& ctx, const ExtensionNode& node) {
    const std::string p = node_file_stem(node);
    ctx.report.add(p + ".stage", node.stage);
    ctx.report.add(p + ".branch_path", node.branch_path());
    std::ostringstream ps;
    for (std::size_t i = 0; i < node.params.size(); ++i) {
        if (i) ps << ", ";
        ps << format_double(node.params[i]);
    }
    ctx.report.add(p + ".params", ps.str());
    ctx.report.add(p + ".K", node.K);
    ctx.report.add_residual(p + ".constraint", node.constraint);
    ctx.report.add_residual(p + ".si", node.si);
    ctx.report.add(p + ".si_constant", node.si_constant);
    ctx.report.add(p + ".poles", static_cast<int>(node.F.poles().size()));
    ctx.report.add(p + ".singular", node.singular);
    for (std::size_t i = 0; i < node.diagnostics.size(); ++i)
        ctx.report.add(p + ".diagnostic." + std::to_string(i), node.diagnostics[i]);
    if (node.stage > 0) {
        ctx.gate_residual(p + ".constraint", node.constraint.max_abs, ctx.cfg.tolerances.residual);
        ctx.gate_residual(p + ".si", node.si.max_abs, ctx.cfg.tolerances.residual);
    }
}

void run_extend(RunContext& ctx) {
    const Grid g = ctx.grid();
    const ExtensionConfig ecfg = ctx.extension_config();
    NodePtr root = make_root(ecfg, g);
    std::vector<NodePtr> level{root};
    report_node(ctx, *root);
    for (int s = 0; s < ctx.cfg.stages; ++s) {
        std::vector<NodePtr> next;
        for (const auto& n : level) {
            auto [a, b] = extend_stage(n, ecfg);
            next.push_back(a);
            next.push_back(b);
        }
        level = std::move(next);
        for (const auto& n : level) report_node(ctx, *n);
    }
    ctx.report.add("leaves", static_cast<int>(level.size()));
    for (const auto& n : level) {
        const std::string stem = node_file_stem(*n);
        write_table(ctx.table_path(stem + "_F.table"), "F", n->F);
        write_table(ctx.table_path(stem + "_vt_plus.table"), "v_tilde_plus", n->v_tilde_plus);
        write_table(ctx.table_path(stem + "_vt_minus.table"), "v_tilde_minus", n->v_tilde_minus);
    }
}

void run_deform(RunContext& ctx) {
    const Grid g = ctx.grid();
    const auto& fam = ctx.family();
    const ParameterPoint p = ctx.params();
    const ExtensionConfig ecfg = ctx.extension_config();
    NodePtr node = make_stage1_node(ecfg, g);

    // anchor away from every flagged pole
    const double win = std::max(ctx.cfg.pole_window, 4.0 * g.h());
    int anchor = -1;
    const int start = static_cast<int>(0.75 * g.n);
    for (int off = 0; off < g.n; ++off) {
        for (int dir : {+1, -1}) {
            const int i = start + dir * off;
            if (i < ctx.cfg.margin || i >= g.n - ctx.cfg.margin) continue;
            bool ok = true;
            for (int q : node->F.poles())
                if (std::fabs(g.x(i) - g.x(q)) < 2.0 * win) ok = false;
            if (ok) {
                anchor = i;
                break;
            }
        }
        if (anchor >= 0) break;
    }
    if (anchor < 0) throw std::runtime_error("deform: no pole-free anchor point");

    DeformationProblem prob;
    prob.W = sample_superpotential(fam, p, g);
    prob.K = ecfg.alpha * ecfg.alpha * node->K;
    prob.sign = DeformationSign::minus;
    prob.x0 = g.x(anchor);
    prob.u0 = 1.0;
    prob.du0 = node->F[anchor] * ecfg.alpha;  // matches chi = alpha*F(alpha x) at the anchor
    prob.w_sampler = [&fam, p](double x) { return fam.w(x, p); };

    GridFunction chi = solve_chi(prob, g);
    write_table(ctx.table_path("chi.table"), "chi", chi);

    const ResidualOptions opts = ctx.residual_opts(g);
    ResidualReport self = chi_residual(chi, prob, opts);
    ctx.report.add_residual("chi_self", self);

    // F in the rescaled variable, recovered exactly from the node's x-frame values
    const bool reversed = ecfg.alpha < 0.0;
    Grid gxi{reversed ? ecfg.alpha * g.b : ecfg.alpha * g.a,
             reversed ? ecfg.alpha * g.a : ecfg.alpha * g.b, g.n};
    GridFunction F_xi = GridFunction::zeros(gxi);
    for (int i = 0; i < g.n; ++i) {
        const int j = reversed ? g.n - 1 - i : i;
        F_xi[j] = node->F[i];
    }
    for (int q : node->F.poles()) F_xi.add_pole(reversed ? g.n - 1 - q : q);

    RouteComparison cmp = route_equivalence(chi, F_xi, ecfg.alpha, opts);
    ctx.report.add("route.scale", cmp.scale);
    ctx.report.add("route.points", cmp.points_compared);
    ctx.report.add_residual("route", cmp.report);
    ctx.report.add("node.K", node->K);
    ctx.gate_residual("route", cmp.report.max_abs, ctx.cfg.tolerances.residual);
}

void run_verify(RunContext& ctx) {
    const Grid g = ctx.grid();
    const auto& fam = ctx.family();
    const ParameterPoint p = ctx.params();
    FactorizationBundle b = partner_potentials(fam, p, g);
    const ResidualOptions opts = ctx.residual_opts(g);

    // similarity identities on standard probes
    const std::vector<std::pair<std::string, std::function<double(double)>>> probes = {
        {"cos", [](double x) { return std::cos(x); }},
        {"quadratic", [](double x) { return x * x; }},
        {"gauss", [](double x) { return std::exp(-0.25 * x * x); }},
    };
    for (const auto& [name, fn] : probes) {
        GridFunction u = GridFunction::sample(g, fn);
        SimilarityReport sim = similarity_residual(b.f, u);
        ctx.report.add_residual("similarity." + name + ".l1", sim.l1_side);
        ctx.report.add_residual("similarity." + name + ".l2", sim.l2_side);
        ctx.gate_residual("similarity." + name + ".l1", sim.l1_side.max_abs,
                          ctx.cfg.tolerances.residual);
        ctx.gate_residual("similarity." + name + ".l2", sim.l2_side.max_abs,
                          ctx.cfg.tolerances.residual);
        ResidualReport cons = h_plus_consistency(b.f, u, b.v_plus);
        ctx.report.add_residual("consistency." + name, cons);
    }

    // base shape invariance
    auto [sirep, sic] = base_shape_invariance_residual(fam, p, g);
    ctx.report.add("base_si.constant", sic);
    ctx.report.add_residual("base_si", sirep);
    ctx.gate_residual("base_si", sirep.max_abs, ctx.cfg.tolerances.residual);

    // extension chain certificates
    const ExtensionConfig ecfg = ctx.extension_config();
    NodePtr node = make_stage1_node(ecfg, g);
    ctx.report.add("node.K", node->K);
    ctx.report.add_residual("constraint", node->constraint);
    ctx.report.add_residual("gennext_si", node->si);
    ctx.report.add("gennext_si.constant", node->si_constant);
    ctx.gate_residual("constraint", node->constraint.max_abs, ctx.cfg.tolerances.residual);
    ctx.gate_residual("gennext_si", node->si.max_abs, ctx.cfg.tolerances.residual);

    // quantum Hamilton-Jacobi residual for the configured eigenindex
    SolveOptions sopts;
    sopts.want_vectors = true;
    WeightLogDerivative ld{
        GridFunction::sample(g, [&](double x) { return -fam.w(x, p); }),
        GridFunction::sample(g, [&](double x) { return -fam.dw(x, p); })};
    SpectrumResult spec =
        solve_weighted(b.g, GridFunction::zeros(g), ctx.cfg.eigenindex + 1, sopts, &ld);
    GridFunction omega_prime = eigenfunction_logderivative(spec.eigenfunctions[ctx.cfg.eigenindex]);
    ResidualReport qhj = qhj_residual(omega_prime, b.g, GridFunction::zeros(g),
                                      spec.eigenvalues[ctx.cfg.eigenindex], opts);
    ctx.report.add("qhj.eigenvalue", spec.eigenvalues[ctx.cfg.eigenindex]);
    ctx.report.add_residual("qhj", qhj);
    ctx.gate_residual("qhj", qhj.max_abs, ctx.cfg.tolerances.residual);
}

void run_scan(RunContext& ctx) {
    const Grid g = ctx.grid();
    const ExtensionConfig ecfg = ctx.extension_config();
    NodePtr node = make_stage1_node(ecfg, g);
    SingularityReport rep = singularity_scan(*node);
    ctx.report.add("verdict", rep.regular ? "regular" : "singular");
    ctx.report.add("poles", static_cast<int>(rep.poles.size()));
    std::vector<double> xs, kinds;
    for (std::size_t i = 0; i < rep.poles.size(); ++i) {
        ctx.report.add("pole." + std::to_string(i) + ".x", rep.poles[i].x);
        ctx.report.add("pole." + std::to_string(i) + ".kind", pole_kind_name(rep.poles[i].kind));
        xs.push_back(rep.poles[i].x);
        kinds.push_back(static_cast<double>(rep.poles[i].kind));
    }
    write_table(ctx.table_path("poles.table"), {"x", "kind"}, {xs, kinds});
}

}  // namespace

int run(const RunConfig& config) {
    RunContext ctx;
    ctx.cfg = config;
    ctx.out = fs::path(config.output_dir);

    try {
        std::error_code ec;
        fs::create_directories(ctx.out, ec);
        if (ec || !fs::is_directory(ctx.out)) {
            return 1;
        }
    } catch (const std::exception&) {
        return 1;
    }

    echo_config(ctx);
    int code = 0;
    try {
        switch (config.command) {
            case Command::catalog: run_catalog(ctx); break;
            case Command::factorize: run_factorize(ctx); break;
            case Command::spectrum: run_spectrum(ctx); break;
            case Command::extend: run_extend(ctx); break;
            case Command::deform: run_deform(ctx); break;
            case Command::verify: run_verify(ctx); break;
            case Command::scan: run_scan(ctx); break;
        }
        if (ctx.tolerance_exceeded) code = 2;
    } catch (const std::invalid_argument& e) {
        ctx.report.add("error", e.what());
        code = 1;
    } catch (const std::overflow_error& e) {
        ctx.report.add("error", e.what());
        code = 3;
    } catch (const std::runtime_error& e) {
        ctx.report.add("error", e.what());
        code = 3;
    }
    ctx.report.add("exit_status", code);
    try {
        ctx.report.write((ctx.out / "report").string());
    } catch (const std::exception&) {
        return 1;
    }
    return code;
}

}  // namespace susy
