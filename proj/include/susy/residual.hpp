#pragma once

#include "susy/grid.hpp"

namespace susy {

/// Summary of a pointwise defect |d(x)| over the usable interior of a grid.
struct ResidualReport {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double argmax_x = 0.0;   // coordinate of the worst point
    int excluded_margin = 0; // boundary points skipped per side
    int points_used = 0;

    bool finite() const;
};

/// Options controlling which points enter a residual report.
struct ResidualOptions {
    int margin = 2;        // boundary points skipped at each end
    int pole_window = 5;   // grid points skipped around each flagged pole
};

/// Reduce |d(x)| to a report, skipping margins and pole windows of d itself.
ResidualReport residual_report(const GridFunction& d, ResidualOptions opts = {});

/// Same, but measuring |d(x) - target| against a constant target.
ResidualReport residual_report_against(const GridFunction& d, double target,
                                       ResidualOptions opts = {});

/// Mean of d over the usable points (margins and pole windows skipped).
double masked_mean(const GridFunction& d, ResidualOptions opts = {});

}  // namespace susy
