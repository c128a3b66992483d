#pragma once

#include "susy/grid.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace susy {

/// Ordered list of real parameters. Base families interpret the entries by
/// position; extension-tree nodes at stage n carry 2^n entries.
struct ParameterPoint {
    std::vector<double> values;

    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// Open interval the potential lives on; infinite endpoints allowed.
struct Domain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(const Grid& g) const { return g.a > lo && g.b < hi; }
};

/// A catalog entry: analytic superpotential W(x;p), its derivative, the
/// nodeless weight factor f = exp(-∫W), the parameter-shift rule and, where
/// closed forms exist, the spectrum and eigenfunctions of the factorized
/// operator -d² + W² - W' (whose ground level sits at zero).
struct SuperpotentialFamily {
    std::string name;
    std::vector<std::string> parameter_names;
    ParameterPoint default_params;
    Domain domain;
    int shift_index = 0;  // which parameter the shift rule moves
    std::string spectrum_text;

    std::function<double(double, const ParameterPoint&)> w;
    std::function<double(double, const ParameterPoint&)> dw;
    std::function<double(double, const ParameterPoint&)> log_f;  // ln f = -∫W
    std::function<ParameterPoint(const ParameterPoint&)> shift;
    std::function<void(const ParameterPoint&)> validate_params;

    // k-th eigenvalue of -d² + W² - W'; empty when no closed form is known.
    std::function<double(const ParameterPoint&, int)> spectrum;
    // largest valid eigenindex (finite for potentials with finitely many
    // bound states); <0 means "no bound on k".
    std::function<int(const ParameterPoint&)> spectrum_max;

    // closed-form eigenfunctions of -d² + W² - W' (unnormalized) and their
    // derivatives; available for k <= analytic_eigen_max.
    int analytic_eigen_max = -1;
    std::function<double(double, const ParameterPoint&, int)> phi;
    std::function<double(double, const ParameterPoint&, int)> dphi;

    double f(double x, const ParameterPoint& p) const;

    bool has_spectrum() const { return static_cast<bool>(spectrum); }
    bool has_analytic_eigenfunctions(int k) const {
        return analytic_eigen_max >= 0 && k <= analytic_eigen_max;
    }
};

/// Registered family names, in catalog order.
std::vector<std::string> family_names();

/// Throws std::invalid_argument (listing the catalog) for unknown names.
const SuperpotentialFamily& lookup_family(const std::string& name);

/// Clamp a requested [a,b] to the family domain; half-line families get
/// a left edge of at least eps_frac*(b-a) above the singular endpoint.
Grid make_family_grid(const SuperpotentialFamily& fam, double a, double b, int n,
                      double eps_frac = 1e-3);

/// W sampled on the grid. Throws when the grid leaves the family domain.
GridFunction sample_superpotential(const SuperpotentialFamily& fam, const ParameterPoint& p,
                                   const Grid& grid);

/// dW/dx sampled on the grid.
GridFunction sample_superpotential_derivative(const SuperpotentialFamily& fam,
                                              const ParameterPoint& p, const Grid& grid);

/// (f, g=f²) sampled on the grid. The exponent of f is guarded: values of
/// |ln f| above exp_bound raise an overflow error.
std::pair<GridFunction, GridFunction> sample_weight(const SuperpotentialFamily& fam,
                                                    const ParameterPoint& p, const Grid& grid,
                                                    double exp_bound = 700.0);

// Orthogonal-polynomial helpers used by the closed-form eigenfunctions.
double hermite_phys(int k, double y);             // H_k, physicists' convention
double laguerre(int k, double alpha, double y);   // L_k^(alpha)

}  // namespace susy
