#pragma once

#include "susy/family.hpp"
#include "susy/grid.hpp"
#include "susy/residual.hpp"
#include "susy/spectral.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace susy {

enum class Branch { L1, L2 };

std::string branch_name(Branch b);

/// Parameters of one extension step. The ansatz superpotential is
/// lambda*F(x); mu = lambda + alpha is its shifted value and alpha enters
/// the rescaled variable xi = alpha*x of the shape-function constraint.
struct ExtensionConfig {
    std::string family = "harmonic_oscillator";
    ParameterPoint base_params;      // family parameters; empty -> defaults
    double lambda = 1.0;
    double alpha = 1.0;              // mu - lambda, must be nonzero
    int eigenindex = 1;
    Branch branch = Branch::L1;
    ResidualOptions residual_opts{};
    double pole_window_x = 0.0;      // extra pole window in x units (0: +-5h only)

    double mu() const { return lambda + alpha; }
    void validate() const;
};

/// One node of the extension tree. Stage 0 is the base family pair; each
/// further stage extends one of the two partner potentials of its parent.
/// The node keeps the weighted-operator data in the transformed
/// (Schrödinger) frame as well, which makes the stage-n recursion exact:
/// the effective potential of a child is T_parent + vt_branch - E0.
struct ExtensionNode {
    int stage = 0;
    Branch branch = Branch::L1;
    ParameterPoint params;            // 2^stage entries
    double K = 0.0;                   // seed eigenvalue gap of this node's F
    double lambda = 0.0;              // ansatz coefficient used for vt_plus/minus
    double mu = 0.0;

    GridFunction F;                   // shape function, poles flagged
    GridFunction v_tilde_plus;        // W~^2 + (1/g)(g W~)' with W~ = lambda F
    GridFunction v_tilde_minus;       // W~^2 - (1/g)(g W~)'  (zero-mode side)
    GridFunction weight;              // current weight g
    GridFunction weight_logderiv;     // (ln sqrt g)'
    GridFunction schrodinger_potential;  // V_eff of L1(weight)
    GridFunction seed_psi;            // psi whose log-derivative produced F

    std::shared_ptr<const ExtensionNode> parent;
    ResidualReport constraint;        // shape-function constraint residual
    ResidualReport si;                // gen-next shape-invariance residual
    double si_constant = 0.0;
    bool singular = false;            // interior pole present
    std::vector<std::string> diagnostics;

    std::string branch_path() const;  // e.g. "L1/L2"
};

using NodePtr = std::shared_ptr<const ExtensionNode>;

/// Seed solution of the factorized equation in the rescaled variable:
/// phi is the eigenindex-th eigenfunction of -(1/f) d f² d (1/f) on
/// grid_xi and K its eigenvalue. Closed forms are used when the family
/// provides them, the finite-difference solver otherwise.
std::pair<GridFunction, double> build_phi(const ExtensionConfig& cfg, const Grid& grid_xi);

/// psi = phi/f pointwise, F = (D psi)/psi with interior zeros flagged.
GridFunction build_F(const GridFunction& phi, const GridFunction& f);

/// Residual of the shape-function constraint
///   F² + (1/g) D(g F) = c
/// against the given constant c. For an F derived from a seed with
/// eigenvalue gap K (in the matching frame), c = -K.
ResidualReport constraint_residual_F(const GridFunction& F, const GridFunction& g_bar, double c,
                                     ResidualOptions opts = {});
/// Analytic-derivative variant: dF and the weight log-derivative
/// glog = g'/g are supplied in closed form.
ResidualReport constraint_residual_F_analytic(const GridFunction& F, const GridFunction& dF,
                                              const GridFunction& glog, double c,
                                              ResidualOptions opts = {});

/// Next-generation partner potentials for the ansatz W~ = lambda*F:
///   vt_pm = (lambda F)² ± (1/g) D(g lambda F)
/// Numeric derivatives by default; dF/glog override them when supplied.
std::pair<GridFunction, GridFunction> nextgen_partners(const GridFunction& F,
                                                       const GridFunction& g, double lambda,
                                                       const GridFunction* dF = nullptr,
                                                       const GridFunction* glog = nullptr);

/// Gen-next shape invariance: the construction makes
///   d(x) = [W~²(lambda) - (1/g)(g W~(lambda))'] - [W~²(mu) + (1/g)(g W~(mu))']
/// constant when mu - lambda equals the alpha used to build F. Returns the
/// deviation-from-mean report and the constant estimate.
std::pair<ResidualReport, double> gennext_si_residual(const GridFunction& F, const GridFunction& g,
                                                      double lambda, double mu,
                                                      const GridFunction* dF = nullptr,
                                                      const GridFunction* glog = nullptr,
                                                      ResidualOptions opts = {});

/// Residual of the quantum Hamilton-Jacobi form for L = L1 + v_tilde:
///   (Omega')² + (1/g) D(g Omega') - v_tilde + E = 0
/// for Omega' = psi'/psi of an eigenfunction with eigenvalue E.
ResidualReport qhj_residual(const GridFunction& omega_prime, const GridFunction& g,
                            const GridFunction& v_tilde, double E, ResidualOptions opts = {});

/// Stage-0 node for a family (base weight, partner data, no extension yet).
NodePtr make_root(const ExtensionConfig& cfg, const Grid& grid);

/// Stage-1 node built through the analytic/numeric seed chain in the
/// rescaled variable (the route exercised by the per-operation checks).
NodePtr make_stage1_node(const ExtensionConfig& cfg, const Grid& grid);

/// Extend a node one stage along both branches. Branch L1 continues the
/// zero-mode side (vt_minus), branch L2 the partner side (vt_plus); at the
/// root the two branches are the two base factorized operators.
std::pair<NodePtr, NodePtr> extend_stage(const NodePtr& node, const ExtensionConfig& cfg);

/// Full binary tree to the requested stage; returns the leaves in
/// branch order (L1.. before L2..).
std::vector<NodePtr> extend_tree(const NodePtr& root, const ExtensionConfig& cfg, int stages);

}  // namespace susy
