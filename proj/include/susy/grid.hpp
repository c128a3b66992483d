#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace susy {

/// Uniform 1D grid on [a, b] with n points.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    int n = 0;

    double h() const { return (b - a) / (n - 1); }
    double x(int i) const { return a + i * h(); }

    bool operator==(const Grid& o) const { return a == o.a && b == o.b && n == o.n; }

    /// Throws std::invalid_argument unless b > a and n >= 3.
    void validate() const;
};

/// Real function sampled on a Grid. Interior poles (points where the
/// underlying function is singular or crosses zero in a denominator) are
/// carried as a sorted index list instead of non-finite values.
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(Grid g, std::vector<double> v);

    static GridFunction sample(const Grid& g, const std::function<double(double)>& fn);
    static GridFunction zeros(const Grid& g);

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double x(int i) const { return grid_.x(i); }

    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    const std::vector<int>& poles() const { return poles_; }
    bool has_poles() const { return !poles_.empty(); }
    void add_pole(int i);
    void merge_poles(const std::vector<int>& other);
    /// True when i is within `window` grid points of a flagged pole.
    bool near_pole(int i, int window) const;

  private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<int> poles_;  // sorted, unique
};

/// Throws std::invalid_argument when the two functions live on different grids.
void require_same_grid(const GridFunction& u, const GridFunction& v, const char* what);

/// Centered 3-point first difference; one-sided at the two endpoints.
/// Poles of u propagate to touched stencil points.
GridFunction derivative(const GridFunction& u);

/// Narrow 3-point second difference; copies neighbour values at endpoints.
GridFunction second_difference(const GridFunction& u);

/// Trapezoidal inner products and norms.
double inner(const GridFunction& u, const GridFunction& v);
double inner_weighted(const GridFunction& g, const GridFunction& u, const GridFunction& v);
double norm(const GridFunction& u);
double norm_weighted(const GridFunction& g, const GridFunction& u);

/// 4-point (cubic) Lagrange interpolation of u at coordinate xq.
/// Clamps the stencil near the ends; xq must lie inside [a, b].
double interpolate_cubic(const GridFunction& u, double xq);

/// Pointwise combinations, pole masks merged.
GridFunction multiply(const GridFunction& u, const GridFunction& v);
GridFunction divide(const GridFunction& u, const GridFunction& v);

}  // namespace susy
