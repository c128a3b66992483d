#pragma once

#include "susy/grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace susy {

struct SolverMeta {
    Grid grid;
    std::string method = "dense_fd";
    double tolerance = 0.0;       // eigenvalue bisection tolerance actually used
    bool richardson = false;
    std::vector<std::string> warnings;  // boundary-leakage notes etc.
};

/// Bound-state eigenvalues (ascending) and, on request, eigenfunctions.
/// Eigenfunctions are unit-normalized under the relevant inner product
/// (plain for the Schrödinger form, g-weighted for the weighted operator),
/// with the sign fixed so the first non-negligible interior value is
/// positive.
struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<GridFunction> eigenfunctions;
    SolverMeta meta;
};

struct SolveOptions {
    bool want_vectors = false;
    bool richardson = false;
    /// Analytic potential sampler used to rebuild V on the refined grid for
    /// Richardson extrapolation; when absent, cubic interpolation is used.
    std::function<double(double)> potential_sampler;
    double leak_tol = 1e-6;
};

/// Analytic log-derivative data for a weight g: s1 = (ln sqrt g)' and
/// s2 = (ln sqrt g)''. Supplied by callers that know g in closed form;
/// the numeric fallback differentiates ln g on the grid.
struct WeightLogDerivative {
    GridFunction s1;
    GridFunction s2;
};

/// Lowest k eigenpairs of -d²/dx² + V with Dirichlet ends, via Sturm-count
/// bisection on the O(h²) finite-difference matrix plus inverse iteration.
/// Optional Richardson extrapolation combines the h and h/2 grids.
SpectrumResult solve_schrodinger(const GridFunction& V, int k, SolveOptions opts = {});

/// Lowest k eigenpairs of L = -(1/g) d g d + v_tilde. Solved through the
/// exact similarity psi = g^(-1/2) w, which maps L to -d² + V_eff with
/// V_eff = v_tilde + s1² + s2. Returned eigenfunctions are psi,
/// normalized under the g-weighted inner product.
SpectrumResult solve_weighted(const GridFunction& g, const GridFunction& v_tilde, int k,
                              SolveOptions opts = {},
                              const WeightLogDerivative* logderiv = nullptr);

/// F = (D psi)/psi with interior sign changes of psi flagged as poles.
GridFunction eigenfunction_logderivative(const GridFunction& psi);

/// Interior sign changes (Sturm oscillation count).
int count_sign_changes(const GridFunction& psi, double negligible = 1e-9);

// Tridiagonal core, exposed for tests: lowest k eigenvalues of the
// symmetric matrix with diagonal d and off-diagonal e.
std::vector<double> tridiag_lowest_eigenvalues(const std::vector<double>& d,
                                               const std::vector<double>& e, int k);
std::vector<double> tridiag_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                        double lambda);

}  // namespace susy
