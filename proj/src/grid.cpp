#include "susy/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace susy {

void Grid::validate() const {
    if (!(b > a)) throw std::invalid_argument("grid: b must exceed a");
    if (n < 3) throw std::invalid_argument("grid: n must be >= 3");
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("grid: endpoints must be finite");
}

GridFunction::GridFunction(Grid g, std::vector<double> v) : grid_(g), values_(std::move(v)) {
    grid_.validate();
    if (static_cast<int>(values_.size()) != grid_.n)
        throw std::invalid_argument("grid function: value count does not match grid");
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(double)>& fn) {
    g.validate();
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = fn(g.x(i));
    return GridFunction(g, std::move(v));
}

GridFunction GridFunction::zeros(const Grid& g) {
    g.validate();
    return GridFunction(g, std::vector<double>(g.n, 0.0));
}

void GridFunction::add_pole(int i) {
    if (i < 0 || i >= size()) return;
    auto it = std::lower_bound(poles_.begin(), poles_.end(), i);
    if (it == poles_.end() || *it != i) poles_.insert(it, i);
}

void GridFunction::merge_poles(const std::vector<int>& other) {
    for (int i : other) add_pole(i);
}

bool GridFunction::near_pole(int i, int window) const {
    if (poles_.empty()) return false;
    auto it = std::lower_bound(poles_.begin(), poles_.end(), i - window);
    return it != poles_.end() && *it <= i + window;
}

void require_same_grid(const GridFunction& u, const GridFunction& v, const char* what) {
    if (!(u.grid() == v.grid())) {
        throw std::invalid_argument(std::string(what) + ": operands live on different grids");
    }
}

GridFunction derivative(const GridFunction& u) {
    const int n = u.size();
    const double h = u.grid().h();
    std::vector<double> d(n);
    for (int i = 1; i < n - 1; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    d[0] = (u[1] - u[0]) / h;
    d[n - 1] = (u[n - 1] - u[n - 2]) / h;
    GridFunction out(u.grid(), std::move(d));
    for (int p : u.poles()) {
        out.add_pole(p - 1);
        out.add_pole(p);
        out.add_pole(p + 1);
    }
    return out;
}

GridFunction second_difference(const GridFunction& u) {
    const int n = u.size();
    const double h2 = u.grid().h() * u.grid().h();
    std::vector<double> d(n);
    for (int i = 1; i < n - 1; ++i) d[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
    d[0] = d[1];
    d[n - 1] = d[n - 2];
    GridFunction out(u.grid(), std::move(d));
    for (int p : u.poles()) {
        out.add_pole(p - 1);
        out.add_pole(p);
        out.add_pole(p + 1);
    }
    return out;
}

double inner(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v, "inner");
    const int n = u.size();
    const double h = u.grid().h();
    double s = 0.5 * (u[0] * v[0] + u[n - 1] * v[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += u[i] * v[i];
    return s * h;
}

double inner_weighted(const GridFunction& g, const GridFunction& u, const GridFunction& v) {
    require_same_grid(g, u, "inner_weighted");
    require_same_grid(u, v, "inner_weighted");
    const int n = u.size();
    const double h = u.grid().h();
    double s = 0.5 * (g[0] * u[0] * v[0] + g[n - 1] * u[n - 1] * v[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += g[i] * u[i] * v[i];
    return s * h;
}

double norm(const GridFunction& u) { return std::sqrt(inner(u, u)); }

double norm_weighted(const GridFunction& g, const GridFunction& u) {
    return std::sqrt(inner_weighted(g, u, u));
}

double interpolate_cubic(const GridFunction& u, double xq) {
    const Grid& g = u.grid();
    if (xq < g.a - 1e-12 * (g.b - g.a) || xq > g.b + 1e-12 * (g.b - g.a))
        throw std::invalid_argument("interpolate_cubic: query outside grid");
    const double h = g.h();
    int i = static_cast<int>(std::floor((xq - g.a) / h));
    // 4-point stencil i0..i0+3 around the query
    int i0 = std::clamp(i - 1, 0, g.n - 4);
    double r = 0.0;
    for (int j = 0; j < 4; ++j) {
        double lj = 1.0;
        const double xj = g.x(i0 + j);
        for (int m = 0; m < 4; ++m) {
            if (m == j) continue;
            lj *= (xq - g.x(i0 + m)) / (xj - g.x(i0 + m));
        }
        r += lj * u[i0 + j];
    }
    return r;
}

GridFunction multiply(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v, "multiply");
    std::vector<double> w(u.size());
    for (int i = 0; i < u.size(); ++i) w[i] = u[i] * v[i];
    GridFunction out(u.grid(), std::move(w));
    out.merge_poles(u.poles());
    out.merge_poles(v.poles());
    return out;
}

GridFunction divide(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v, "divide");
    std::vector<double> w(u.size());
    for (int i = 0; i < u.size(); ++i) w[i] = u[i] / v[i];
    GridFunction out(u.grid(), std::move(w));
    out.merge_poles(u.poles());
    out.merge_poles(v.poles());
    for (int i = 0; i < v.size(); ++i)
        if (v[i] == 0.0) out.add_pole(i);
    return out;
}

}  // namespace susy
