#include "susy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace susy {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

/// Number of eigenvalues of tridiag(d, e) strictly below x (Sturm count).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        double denom = q;
        if (std::fabs(denom) < kTiny) denom = denom < 0.0 ? -kTiny : kTiny;
        q = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Partial-pivoting LU of (T - sigma I) for inverse iteration. Pivoting
/// introduces one extra superdiagonal (du2).
struct ShiftedTridiagSolver {
    std::vector<double> du0, du1, du2, dl;
    std::vector<int> piv;
    int n;

    ShiftedTridiagSolver(const std::vector<double>& d, const std::vector<double>& e, double sigma)
        : du0(d.size()), du1(d.size(), 0.0), du2(d.size(), 0.0), dl(d.size(), 0.0),
          piv(d.size(), 0), n(static_cast<int>(d.size())) {
        std::vector<double> sub(n, 0.0);
        for (int i = 0; i < n; ++i) du0[i] = d[i] - sigma;
        for (int i = 0; i + 1 < n; ++i) du1[i] = e[i];
        for (int i = 0; i + 1 < n; ++i) sub[i + 1] = e[i];
        for (int i = 0; i + 1 < n; ++i) {
            if (std::fabs(sub[i + 1]) > std::fabs(du0[i])) {
                // swap rows i and i+1
                piv[i] = 1;
                std::swap(du0[i], sub[i + 1]);
                std::swap(du1[i], du0[i + 1]);
                if (i + 2 < n) {
                    du2[i] = du1[i + 1];
                    du1[i + 1] = 0.0;
                }
            }
            double p = du0[i];
            if (std::fabs(p) < kTiny) p = p < 0.0 ? -kTiny : kTiny;
            const double m = sub[i + 1] / p;
            dl[i] = m;
            du0[i + 1] -= m * du1[i];
            if (i + 2 < n) du1[i + 1] -= m * du2[i];
        }
    }

    void solve(std::vector<double>& b) const {
        for (int i = 0; i + 1 < n; ++i) {
            if (piv[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl[i] * b[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = b[i];
            if (i + 1 < n) s -= du1[i] * b[i + 1];
            if (i + 2 < n) s -= du2[i] * b[i + 2];
            double p = du0[i];
            if (std::fabs(p) < kTiny) p = p < 0.0 ? -kTiny : kTiny;
            b[i] = s / p;
        }
    }
};

double matrix_scale(const std::vector<double>& d, const std::vector<double>& e) {
    double s = 0.0;
    for (double v : d) s = std::max(s, std::fabs(v));
    for (double v : e) s = std::max(s, std::fabs(v));
    return std::max(s, 1.0);
}

}  // namespace

std::vector<double> tridiag_lowest_eigenvalues(const std::vector<double>& d,
                                               const std::vector<double>& e, int k) {
    const int n = static_cast<int>(d.size());
    if (k < 1) throw std::invalid_argument("eigensolver: k must be >= 1");
    if (k > n) throw std::invalid_argument("eigensolver: k exceeds matrix dimension");
    // Gershgorin bounds
    double lo = d[0], hi = d[0];
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(e[i - 1]);
        if (i + 1 < n) r += std::fabs(e[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    const double span = hi - lo;
    std::vector<double> evals(k);
    for (int j = 0; j < k; ++j) {
        double a = lo, b = hi;
        // find x with count(x) >= j+1 and count just below
        for (int it = 0; it < 120 && (b - a) > 1e-15 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
            const double m = 0.5 * (a + b);
            if (sturm_count(d, e, m) >= j + 1)
                b = m;
            else
                a = m;
        }
        evals[j] = 0.5 * (a + b);
        (void)span;
    }
    return evals;
}

std::vector<double> tridiag_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                        double lambda) {
    const int n = static_cast<int>(d.size());
    const double scale = matrix_scale(d, e);
    // slight shift off the eigenvalue keeps the factorization regular
    const double sigma = lambda + 1e-13 * scale;
    ShiftedTridiagSolver lu(d, e, sigma);
    // deterministic start vector
    std::vector<double> v(n);
    unsigned long long s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] = 0.5 + static_cast<double>(s % 1000003ull) / 1000003.0;
    }
    for (int it = 0; it < 4; ++it) {
        lu.solve(v);
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw std::runtime_error("inverse iteration failed");
        for (double& x : v) x /= nrm;
    }
    return v;
}

int count_sign_changes(const GridFunction& psi, double negligible) {
    double amax = 0.0;
    for (int i = 0; i < psi.size(); ++i) amax = std::max(amax, std::fabs(psi[i]));
    const double floor_v = negligible * amax;
    int changes = 0;
    double prev = 0.0;
    for (int i = 0; i < psi.size(); ++i) {
        const double v = psi[i];
        if (std::fabs(v) <= floor_v) continue;
        if (prev != 0.0 && ((prev > 0.0) != (v > 0.0))) ++changes;
        prev = v;
    }
    return changes;
}

namespace {

struct CoreResult {
    std::vector<double> evals;
    std::vector<std::vector<double>> vecs;  // interior values
};

CoreResult solve_core(const GridFunction& V, int k, bool want_vectors) {
    const int n = V.size();
    const int m = n - 2;
    if (k > m) throw std::invalid_argument("eigensolver: k exceeds grid capacity");
    const double h = V.grid().h();
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> d(m), e(m - 1, -inv_h2);
    for (int i = 0; i < m; ++i) d[i] = 2.0 * inv_h2 + V[i + 1];
    CoreResult r;
    r.evals = tridiag_lowest_eigenvalues(d, e, k);
    if (want_vectors) {
        r.vecs.reserve(k);
        for (int j = 0; j < k; ++j) {
            r.vecs.push_back(tridiag_eigenvector(d, e, r.evals[j]));
            // re-orthogonalize against close-lying previous vectors
            if (j > 0 && std::fabs(r.evals[j] - r.evals[j - 1]) <
                             1e-8 * std::max(1.0, std::fabs(r.evals[j]))) {
                auto& cur = r.vecs[j];
                const auto& prev = r.vecs[j - 1];
                double dot = 0.0;
                for (int i = 0; i < m; ++i) dot += cur[i] * prev[i];
                double nrm = 0.0;
                for (int i = 0; i < m; ++i) {
                    cur[i] -= dot * prev[i];
                    nrm += cur[i] * cur[i];
                }
                nrm = std::sqrt(nrm);
                for (int i = 0; i < m; ++i) cur[i] /= nrm;
            }
        }
    }
    return r;
}

GridFunction refine_potential(const GridFunction& V, const SolveOptions& opts) {
    const Grid& g = V.grid();
    Grid g2{g.a, g.b, 2 * g.n - 1};
    if (opts.potential_sampler) {
        return GridFunction::sample(g2, opts.potential_sampler);
    }
    std::vector<double> v2(g2.n);
    for (int i = 0; i < g2.n; ++i) {
        if (i % 2 == 0)
            v2[i] = V[i / 2];
        else
            v2[i] = interpolate_cubic(V, g2.x(i));
    }
    return GridFunction(g2, std::move(v2));
}

void fix_sign(std::vector<double>& full) {
    double amax = 0.0;
    for (double v : full) amax = std::max(amax, std::fabs(v));
    for (double v : full) {
        if (std::fabs(v) > 1e-8 * amax) {
            if (v < 0.0)
                for (double& w : full) w = -w;
            break;
        }
    }
}

}  // namespace

SpectrumResult solve_schrodinger(const GridFunction& V, int k, SolveOptions opts) {
    if (k < 1) throw std::invalid_argument("solve_schrodinger: k must be >= 1");
    CoreResult base = solve_core(V, k, opts.want_vectors);

    SpectrumResult out;
    out.meta.grid = V.grid();
    out.meta.method = "dense_fd";
    out.meta.richardson = opts.richardson;
    out.meta.tolerance = 1e-15;

    out.eigenvalues = base.evals;
    if (opts.richardson) {
        GridFunction V2 = refine_potential(V, opts);
        CoreResult fine = solve_core(V2, k, false);
        for (int j = 0; j < k; ++j)
            out.eigenvalues[j] = (4.0 * fine.evals[j] - base.evals[j]) / 3.0;
    }

    if (opts.want_vectors) {
        const int n = V.size();
        for (int j = 0; j < k; ++j) {
            std::vector<double> full(n, 0.0);
            for (int i = 0; i < n - 2; ++i) full[i + 1] = base.vecs[j][i];
            fix_sign(full);
            GridFunction psi(V.grid(), std::move(full));
            const double nrm = norm(psi);
            for (int i = 0; i < n; ++i) psi[i] /= nrm;
            double amax = 0.0;
            for (int i = 0; i < n; ++i) amax = std::max(amax, std::fabs(psi[i]));
            if (std::max(std::fabs(psi[1]), std::fabs(psi[n - 2])) > opts.leak_tol * amax) {
                out.meta.warnings.push_back("boundary leakage in eigenfunction " +
                                            std::to_string(j));
            }
            out.eigenfunctions.push_back(std::move(psi));
        }
    }
    return out;
}

SpectrumResult solve_weighted(const GridFunction& g, const GridFunction& v_tilde, int k,
                              SolveOptions opts, const WeightLogDerivative* logderiv) {
    require_same_grid(g, v_tilde, "solve_weighted");
    for (int i = 0; i < g.size(); ++i)
        if (!(g[i] > 0.0)) throw std::invalid_argument("solve_weighted: weight must be positive");

    const int n = g.size();
    std::vector<double> veff(n);
    if (logderiv) {
        require_same_grid(g, logderiv->s1, "solve_weighted");
        for (int i = 0; i < n; ++i) {
            const double s1 = logderiv->s1[i];
            veff[i] = v_tilde[i] + s1 * s1 + logderiv->s2[i];
        }
    } else {
        std::vector<double> lng(n);
        for (int i = 0; i < n; ++i) lng[i] = 0.5 * std::log(g[i]);
        GridFunction S(g.grid(), std::move(lng));
        GridFunction s1 = derivative(S);
        GridFunction s2 = second_difference(S);
        for (int i = 0; i < n; ++i) veff[i] = v_tilde[i] + s1[i] * s1[i] + s2[i];
    }

    const bool want_vectors = opts.want_vectors;
    SpectrumResult res = solve_schrodinger(GridFunction(g.grid(), std::move(veff)), k, opts);
    res.meta.method = "dense_fd(weighted)";
    if (want_vectors) {
        for (auto& psi : res.eigenfunctions) {
            for (int i = 0; i < n; ++i) psi[i] /= std::sqrt(g[i]);
            const double nrm = norm_weighted(g, psi);
            for (int i = 0; i < n; ++i) psi[i] /= nrm;
        }
    }
    return res;
}

GridFunction eigenfunction_logderivative(const GridFunction& psi) {
    GridFunction dpsi = derivative(psi);
    const int n = psi.size();
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = psi[i] != 0.0 ? dpsi[i] / psi[i] : 0.0;
    GridFunction out(psi.grid(), std::move(f));
    out.merge_poles(psi.poles());
    for (int i = 0; i + 1 < n; ++i) {
        if (psi[i] == 0.0 && i > 0) out.add_pole(i);
        if (psi[i] * psi[i + 1] < 0.0) {
            out.add_pole(std::fabs(psi[i]) <= std::fabs(psi[i + 1]) ? i : i + 1);
        }
    }
    return out;
}

}  // namespace susy
