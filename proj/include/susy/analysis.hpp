#pragma once

#include "susy/pipeline.hpp"
#include "susy/spectral.hpp"

#include <string>
#include <vector>

namespace susy {

enum class PoleKind { node_of_psi, weight_zero, potential_pole };

std::string pole_kind_name(PoleKind k);

struct PoleRecord {
    double x = 0.0;
    PoleKind kind = PoleKind::node_of_psi;
};

/// Verdict over the open interior of the node's grid. Endpoint walls
/// (half-line 1/x² behaviour) do not count as singularities.
struct SingularityReport {
    std::vector<PoleRecord> poles;
    bool regular = true;
};

/// Consolidates the node's flagged poles, refines sign-change locations by
/// bisection on the (interpolated) seed psi to 1e-8*(b-a), classifies each
/// and returns the verdict.
SingularityReport singularity_scan(const ExtensionNode& node);

enum class MatchMode { exact, drop_lowest_a };

struct SpectralMatch {
    struct Pair {
        int index_a;
        int index_b;
        double gap;
    };
    std::vector<Pair> pairs;
    std::vector<int> unmatched_a;
    std::vector<int> unmatched_b;
    double shift = 0.0;
};

/// Greedy ascending matching of two spectra after an optional removal of
/// spec_a's lowest level and subtraction of the best constant shift
/// (least squares over matched pairs). Gaps above tol land in the
/// unmatched lists; that is a reported outcome, not an error.
SpectralMatch isospectral_compare(const SpectrumResult& spec_a, const SpectrumResult& spec_b,
                                  MatchMode mode, double tol);

/// Same on raw eigenvalue lists (used by the matcher tests).
SpectralMatch isospectral_compare(const std::vector<double>& a, const std::vector<double>& b,
                                  MatchMode mode, double tol);

}  // namespace susy
