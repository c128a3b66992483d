#include "susy/residual.hpp"

#include <cmath>
#include <stdexcept>

namespace susy {

bool ResidualReport::finite() const {
    return std::isfinite(max_abs) && std::isfinite(mean_abs);
}

namespace {

template <typename F>
ResidualReport reduce(const GridFunction& d, ResidualOptions opts, F&& value) {
    const int n = d.size();
    if (opts.margin < 0 || 2 * opts.margin >= n)
        throw std::invalid_argument("residual: margin leaves no interior points");
    ResidualReport r;
    r.excluded_margin = opts.margin;
    double sum = 0.0;
    for (int i = opts.margin; i < n - opts.margin; ++i) {
        if (d.near_pole(i, opts.pole_window)) continue;
        const double v = std::fabs(value(i));
        sum += v;
        if (v >= r.max_abs) {
            r.max_abs = v;
            r.argmax_x = d.x(i);
        }
        ++r.points_used;
    }
    r.mean_abs = r.points_used > 0 ? sum / r.points_used : 0.0;
    return r;
}

}  // namespace

ResidualReport residual_report(const GridFunction& d, ResidualOptions opts) {
    return reduce(d, opts, [&](int i) { return d[i]; });
}

ResidualReport residual_report_against(const GridFunction& d, double target, ResidualOptions opts) {
    return reduce(d, opts, [&](int i) { return d[i] - target; });
}

double masked_mean(const GridFunction& d, ResidualOptions opts) {
    const int n = d.size();
    double sum = 0.0;
    int cnt = 0;
    for (int i = opts.margin; i < n - opts.margin; ++i) {
        if (d.near_pole(i, opts.pole_window)) continue;
        sum += d[i];
        ++cnt;
    }
    return cnt > 0 ? sum / cnt : 0.0;
}

}  // namespace susy
