#pragma once

#include "susy/family.hpp"
#include "susy/grid.hpp"
#include "susy/residual.hpp"

namespace susy {

/// Partner potentials and weights of one family at one parameter point.
/// Sign convention fixed by expanding the factorized forms: the operator
/// -(1/f) d f² d (1/f) equals -d² + W² - W', so v_plus = W² - W' (it carries
/// the zero mode f) and v_minus = W² + W'.
struct FactorizationBundle {
    GridFunction v_plus;
    GridFunction v_minus;
    GridFunction f;
    GridFunction g;
    ParameterPoint lambda;
};

FactorizationBundle partner_potentials(const SuperpotentialFamily& fam, const ParameterPoint& p,
                                       const Grid& grid);

/// Factorized applications, nested centered first differences throughout:
///   H+ u = -(1/f) D[ f² D[u/f] ]        H- u = -f D[ (1/f²) D[f u] ]
///   L1 u = -(1/g) D[ g D[u] ]           L2 u = -g D[ (1/g) D[u] ]
/// The outermost two points per side carry one-sided differences and are
/// meant to be excluded from residual reports.
GridFunction apply_H_plus(const GridFunction& f, const GridFunction& u);
GridFunction apply_H_minus(const GridFunction& f, const GridFunction& u);
GridFunction apply_L1(const GridFunction& g, const GridFunction& u);
GridFunction apply_L2(const GridFunction& g, const GridFunction& u);

/// Residuals of the similarity relations L1 = f⁻¹ H+ f and L2 = f H- f⁻¹
/// (for g = f²) on a probe u. Both sides are the nested-difference forms,
/// so the relation is an exact algebraic rearrangement and the residual
/// measures only floating-point noise.
struct SimilarityReport {
    ResidualReport l1_side;
    ResidualReport l2_side;
};
SimilarityReport similarity_residual(const GridFunction& f, const GridFunction& u);

/// Consistency of the nested H+ application against the expanded form
/// -u'' + v_plus u (narrow second difference, analytic coefficient).
/// This is the O(h²) quantity: halving h divides it by about four.
ResidualReport h_plus_consistency(const GridFunction& f, const GridFunction& u,
                                  const GridFunction& v_plus);

/// Base shape invariance: with mu = shift(lambda), the combination
///   d(x) = V-(x, lambda) - V+(x, mu)
/// is constant in x. Returns the deviation-from-mean report and the
/// constant estimate (the mean of d).
std::pair<ResidualReport, double> base_shape_invariance_residual(
    const SuperpotentialFamily& fam, const ParameterPoint& p, const Grid& grid);

/// Same combination for an explicit parameter pair (negative controls).
std::pair<ResidualReport, double> shape_invariance_residual_pair(
    const SuperpotentialFamily& fam, const ParameterPoint& p, const ParameterPoint& mu,
    const Grid& grid);

}  // namespace susy
