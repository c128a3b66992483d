#include "susy/family.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace susy {

double SuperpotentialFamily::f(double x, const ParameterPoint& p) const {
    return std::exp(log_f(x, p));
}

double hermite_phys(int k, double y) {
    if (k == 0) return 1.0;
    double hm = 1.0, h = 2.0 * y;
    for (int j = 1; j < k; ++j) {
        const double hp = 2.0 * y * h - 2.0 * j * hm;
        hm = h;
        h = hp;
    }
    return h;
}

double laguerre(int k, double alpha, double y) {
    if (k == 0) return 1.0;
    double lm = 1.0, l = 1.0 + alpha - y;
    for (int j = 1; j < k; ++j) {
        const double lp = ((2.0 * j + 1.0 + alpha - y) * l - (j + alpha) * lm) / (j + 1.0);
        lm = l;
        l = lp;
    }
    return l;
}

namespace {

void expect_params(const ParameterPoint& p, std::size_t n, const char* fam) {
    if (p.size() != n) {
        std::ostringstream os;
        os << fam << ": expected " << n << " parameter(s), got " << p.size();
        throw std::invalid_argument(os.str());
    }
}

SuperpotentialFamily make_harmonic_oscillator() {
    SuperpotentialFamily fam;
    fam.name = "harmonic_oscillator";
    fam.parameter_names = {"omega"};
    fam.default_params = {{1.0}};
    fam.domain = {};  // full line
    fam.shift_index = 0;
    fam.spectrum_text = "E_k = 2*omega*k";
    fam.validate_params = [](const ParameterPoint& p) {
        expect_params(p, 1, "harmonic_oscillator");
        if (!(p[0] > 0.0)) throw std::invalid_argument("harmonic_oscillator: omega must be positive");
    };
    fam.w = [](double x, const ParameterPoint& p) { return p[0] * x; };
    fam.dw = [](double, const ParameterPoint& p) { return p[0]; };
    fam.log_f = [](double x, const ParameterPoint& p) { return -0.5 * p[0] * x * x; };
    // the oscillator parameter set is a fixed point of the shift rule
    fam.shift = [](const ParameterPoint& p) { return p; };
    fam.spectrum = [](const ParameterPoint& p, int k) { return 2.0 * p[0] * k; };
    fam.spectrum_max = [](const ParameterPoint&) { return -1; };
    fam.analytic_eigen_max = 8;
    fam.phi = [](double x, const ParameterPoint& p, int k) {
        const double s = std::sqrt(p[0]);
        return hermite_phys(k, s * x) * std::exp(-0.5 * p[0] * x * x);
    };
    fam.dphi = [](double x, const ParameterPoint& p, int k) {
        const double s = std::sqrt(p[0]);
        const double hk = hermite_phys(k, s * x);
        const double hkm = k > 0 ? hermite_phys(k - 1, s * x) : 0.0;
        return (2.0 * k * s * hkm - p[0] * x * hk) * std::exp(-0.5 * p[0] * x * x);
    };
    return fam;
}

SuperpotentialFamily make_radial_oscillator() {
    SuperpotentialFamily fam;
    fam.name = "radial_oscillator";
    fam.parameter_names = {"omega", "ell"};
    fam.default_params = {{1.0, 0.0}};
    fam.domain = {0.0, std::numeric_limits<double>::infinity()};
    fam.shift_index = 1;
    fam.spectrum_text = "E_k = 4*omega*k";
    fam.validate_params = [](const ParameterPoint& p) {
        expect_params(p, 2, "radial_oscillator");
        if (!(p[0] > 0.0)) throw std::invalid_argument("radial_oscillator: omega must be positive");
        if (!(p[1] >= 0.0)) throw std::invalid_argument("radial_oscillator: ell must be non-negative");
    };
    fam.w = [](double x, const ParameterPoint& p) { return p[0] * x - (p[1] + 1.0) / x; };
    fam.dw = [](double x, const ParameterPoint& p) { return p[0] + (p[1] + 1.0) / (x * x); };
    fam.log_f = [](double x, const ParameterPoint& p) {
        return (p[1] + 1.0) * std::log(x) - 0.5 * p[0] * x * x;
    };
    fam.shift = [](const ParameterPoint& p) { return ParameterPoint{{p[0], p[1] + 1.0}}; };
    fam.spectrum = [](const ParameterPoint& p, int k) { return 4.0 * p[0] * k; };
    fam.spectrum_max = [](const ParameterPoint&) { return -1; };
    fam.analytic_eigen_max = 8;
    fam.phi = [](double x, const ParameterPoint& p, int k) {
        const double y = p[0] * x * x;
        return std::pow(x, p[1] + 1.0) * laguerre(k, p[1] + 0.5, y) * std::exp(-0.5 * y);
    };
    fam.dphi = [](double x, const ParameterPoint& p, int k) {
        const double y = p[0] * x * x;
        const double lk = laguerre(k, p[1] + 0.5, y);
        const double dlk = k > 0 ? -laguerre(k - 1, p[1] + 1.5, y) : 0.0;  // d/dy L_k^(a)
        const double pref = std::pow(x, p[1] + 1.0) * std::exp(-0.5 * y);
        return pref * ((p[1] + 1.0) / x * lk + 2.0 * p[0] * x * dlk - p[0] * x * lk);
    };
    return fam;
}

SuperpotentialFamily make_coulomb() {
    SuperpotentialFamily fam;
    fam.name = "coulomb";
    fam.parameter_names = {"q", "ell"};
    fam.default_params = {{1.0, 0.0}};
    fam.domain = {0.0, std::numeric_limits<double>::infinity()};
    fam.shift_index = 1;
    fam.spectrum_text = "E_k = (q^2/4)*(1/(ell+1)^2 - 1/(ell+k+1)^2)";
    fam.validate_params = [](const ParameterPoint& p) {
        expect_params(p, 2, "coulomb");
        if (!(p[0] > 0.0)) throw std::invalid_argument("coulomb: q must be positive");
        if (!(p[1] >= 0.0)) throw std::invalid_argument("coulomb: ell must be non-negative");
    };
    fam.w = [](double x, const ParameterPoint& p) {
        return p[0] / (2.0 * (p[1] + 1.0)) - (p[1] + 1.0) / x;
    };
    fam.dw = [](double x, const ParameterPoint& p) { return (p[1] + 1.0) / (x * x); };
    fam.log_f = [](double x, const ParameterPoint& p) {
        return (p[1] + 1.0) * std::log(x) - p[0] * x / (2.0 * (p[1] + 1.0));
    };
    fam.shift = [](const ParameterPoint& p) { return ParameterPoint{{p[0], p[1] + 1.0}}; };
    fam.spectrum = [](const ParameterPoint& p, int k) {
        const double l1 = p[1] + 1.0, lk = p[1] + 1.0 + k;
        return 0.25 * p[0] * p[0] * (1.0 / (l1 * l1) - 1.0 / (lk * lk));
    };
    fam.spectrum_max = [](const ParameterPoint&) { return -1; };
    return fam;
}

SuperpotentialFamily make_morse() {
    SuperpotentialFamily fam;
    fam.name = "morse";
    fam.parameter_names = {"A", "B"};
    fam.default_params = {{4.0, 1.0}};
    fam.domain = {};  // full line
    fam.shift_index = 0;
    fam.spectrum_text = "E_k = A^2 - (A-k)^2, k < A";
    fam.validate_params = [](const ParameterPoint& p) {
        expect_params(p, 2, "morse");
        if (!(p[0] > 0.0)) throw std::invalid_argument("morse: A must be positive");
        if (!(p[1] > 0.0)) throw std::invalid_argument("morse: B must be positive");
    };
    fam.w = [](double x, const ParameterPoint& p) { return p[0] - p[1] * std::exp(-x); };
    fam.dw = [](double x, const ParameterPoint& p) { return p[1] * std::exp(-x); };
    fam.log_f = [](double x, const ParameterPoint& p) { return -p[0] * x - p[1] * std::exp(-x); };
    fam.shift = [](const ParameterPoint& p) { return ParameterPoint{{p[0] - 1.0, p[1]}}; };
    fam.spectrum = [](const ParameterPoint& p, int k) {
        return p[0] * p[0] - (p[0] - k) * (p[0] - k);
    };
    fam.spectrum_max = [](const ParameterPoint& p) {
        const int m = static_cast<int>(std::ceil(p[0])) - 1;
        return m;
    };
    return fam;
}

SuperpotentialFamily make_poschl_teller() {
    SuperpotentialFamily fam;
    fam.name = "poschl_teller";
    fam.parameter_names = {"A"};
    fam.default_params = {{4.0}};
    fam.domain = {};  // full line
    fam.shift_index = 0;
    fam.spectrum_text = "E_k = A^2 - (A-k)^2, k < A";
    fam.validate_params = [](const ParameterPoint& p) {
        expect_params(p, 1, "poschl_teller");
        if (!(p[0] >= 1.0)) throw std::invalid_argument("poschl_teller: A must be >= 1");
    };
    fam.w = [](double x, const ParameterPoint& p) { return p[0] * std::tanh(x); };
    fam.dw = [](double x, const ParameterPoint& p) {
        const double c = std::cosh(x);
        return p[0] / (c * c);
    };
    fam.log_f = [](double x, const ParameterPoint& p) {
        // ln cosh, stable for large |x|
        const double ax = std::fabs(x);
        return -p[0] * (ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0));
    };
    fam.shift = [](const ParameterPoint& p) { return ParameterPoint{{p[0] - 1.0}}; };
    fam.spectrum = [](const ParameterPoint& p, int k) {
        return p[0] * p[0] - (p[0] - k) * (p[0] - k);
    };
    fam.spectrum_max = [](const ParameterPoint& p) {
        return static_cast<int>(std::ceil(p[0])) - 1;
    };
    return fam;
}

const std::map<std::string, SuperpotentialFamily>& catalog() {
    static const std::map<std::string, SuperpotentialFamily> c = [] {
        std::map<std::string, SuperpotentialFamily> m;
        for (auto&& fam : {make_harmonic_oscillator(), make_radial_oscillator(), make_coulomb(),
                           make_morse(), make_poschl_teller()}) {
            m.emplace(fam.name, fam);
        }
        return m;
    }();
    return c;
}

void require_in_domain(const SuperpotentialFamily& fam, const Grid& grid) {
    grid.validate();
    if (!fam.domain.contains(grid)) {
        std::ostringstream os;
        os << fam.name << ": grid [" << grid.a << ", " << grid.b
           << "] leaves the family domain (" << fam.domain.lo << ", " << fam.domain.hi << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

std::vector<std::string> family_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : catalog()) names.push_back(k);
    return names;
}

const SuperpotentialFamily& lookup_family(const std::string& name) {
    const auto& c = catalog();
    auto it = c.find(name);
    if (it == c.end()) {
        std::ostringstream os;
        os << "unknown family '" << name << "'; available:";
        for (const auto& [k, v] : c) os << " " << k;
        throw std::invalid_argument(os.str());
    }
    return it->second;
}

Grid make_family_grid(const SuperpotentialFamily& fam, double a, double b, int n, double eps_frac) {
    double lo = a;
    if (std::isfinite(fam.domain.lo)) {
        const double eps = eps_frac * (b - a);
        lo = std::max(lo, fam.domain.lo + eps);
    }
    double hi = b;
    if (std::isfinite(fam.domain.hi)) {
        const double eps = eps_frac * (b - a);
        hi = std::min(hi, fam.domain.hi - eps);
    }
    Grid g{lo, hi, n};
    g.validate();
    return g;
}

GridFunction sample_superpotential(const SuperpotentialFamily& fam, const ParameterPoint& p,
                                   const Grid& grid) {
    fam.validate_params(p);
    require_in_domain(fam, grid);
    return GridFunction::sample(grid, [&](double x) { return fam.w(x, p); });
}

GridFunction sample_superpotential_derivative(const SuperpotentialFamily& fam,
                                              const ParameterPoint& p, const Grid& grid) {
    fam.validate_params(p);
    require_in_domain(fam, grid);
    return GridFunction::sample(grid, [&](double x) { return fam.dw(x, p); });
}

std::pair<GridFunction, GridFunction> sample_weight(const SuperpotentialFamily& fam,
                                                    const ParameterPoint& p, const Grid& grid,
                                                    double exp_bound) {
    fam.validate_params(p);
    require_in_domain(fam, grid);
    std::vector<double> fv(grid.n), gv(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        const double lf = fam.log_f(grid.x(i), p);
        if (std::fabs(lf) > exp_bound) {
            std::ostringstream os;
            os << fam.name << ": |ln f| = " << std::fabs(lf) << " at x = " << grid.x(i)
               << " exceeds the overflow bound " << exp_bound;
            throw std::overflow_error(os.str());
        }
        fv[i] = std::exp(lf);
        gv[i] = fv[i] * fv[i];
    }
    return {GridFunction(grid, std::move(fv)), GridFunction(grid, std::move(gv))};
}

}  // namespace susy
