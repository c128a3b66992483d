#pragma once

#include "susy/grid.hpp"
#include "susy/residual.hpp"

#include <functional>

namespace susy {

enum class DeformationSign { plus, minus };

/// Isospectral-deformation problem: find chi with
///   chi² ± 2 W chi + chi' + K = 0
/// (sign chosen by `sign`). The Riccati equation linearizes through
/// chi = u'/u with u'' ± 2 W u' + K u = 0, integrated from the seed.
struct DeformationProblem {
    GridFunction W;
    double K = 0.0;
    DeformationSign sign = DeformationSign::minus;
    double x0 = 0.0;
    double u0 = 1.0;
    double du0 = 0.0;
    /// Analytic superpotential sampler; used at integrator half-steps when
    /// present, cubic interpolation of W otherwise.
    std::function<double(double)> w_sampler;

    void validate() const;
};

/// |chi² ± 2W chi + D chi + K| with pole windows excluded.
ResidualReport chi_residual(const GridFunction& chi, const DeformationProblem& problem,
                            ResidualOptions opts = {});

/// Fourth-order one-step integration of the linearized equation from the
/// seed (both directions), then chi = u'/u with zeros of u flagged.
/// Throws on integration blow-up, reporting the last valid coordinate.
GridFunction solve_chi(const DeformationProblem& problem, const Grid& grid);

struct RouteComparison {
    ResidualReport report;
    double scale = 1.0;       // chain-rule factor applied to F
    int points_compared = 0;
};

/// Compares chi(x) against scale*F(alpha x) (scale = alpha, from
/// d/dx = alpha d/dxi), interpolating F cubically; pole windows of either
/// side are skipped.
RouteComparison route_equivalence(const GridFunction& chi, const GridFunction& F_xi, double alpha,
                                  ResidualOptions opts = {});

}  // namespace susy
