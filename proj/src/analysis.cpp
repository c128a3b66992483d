#include "susy/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace susy {

std::string pole_kind_name(PoleKind k) {
    switch (k) {
        case PoleKind::node_of_psi: return "node_of_psi";
        case PoleKind::weight_zero: return "weight_zero";
        case PoleKind::potential_pole: return "potential_pole";
    }
    return "?";
}

namespace {

/// Bisection refinement of a sign change of psi between grid points,
/// on the cubic interpolant.
double refine_sign_change(const GridFunction& psi, int i, double tol) {
    double lo = psi.x(i), hi = psi.x(i + 1);
    double flo = psi[i];
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = interpolate_cubic(psi, mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SingularityReport singularity_scan(const ExtensionNode& node) {
    SingularityReport rep;
    const GridFunction& psi = node.seed_psi;
    const Grid& g = psi.grid();
    const double tol = 1e-8 * (g.b - g.a);
    const int margin = 1;

    // sign changes of the seed psi: true nodes
    for (int i = margin; i + 1 < g.n - margin; ++i) {
        if (psi.near_pole(i, 0) || psi.near_pole(i + 1, 0)) continue;
        if (psi[i] * psi[i + 1] < 0.0) {
            rep.poles.push_back({refine_sign_change(psi, i, tol), PoleKind::node_of_psi});
        }
    }
    // interior zeros of the weight
    const GridFunction& w = node.weight;
    for (int i = margin; i < g.n - margin; ++i) {
        if (w.near_pole(i, 0)) continue;
        if (w[i] == 0.0) rep.poles.push_back({g.x(i), PoleKind::weight_zero});
    }
    // non-finite extended-potential samples not already accounted for
    auto scan_potential = [&](const GridFunction& v) {
        for (int i = margin; i < g.n - margin; ++i) {
            if (!std::isfinite(v[i])) {
                const double x = g.x(i);
                bool near_known = false;
                for (const auto& p : rep.poles) {
                    if (std::fabs(p.x - x) < 2.0 * g.h()) near_known = true;
                }
                if (!near_known) rep.poles.push_back({x, PoleKind::potential_pole});
            }
        }
    };
    scan_potential(node.v_tilde_plus);
    scan_potential(node.v_tilde_minus);

    std::sort(rep.poles.begin(), rep.poles.end(),
              [](const PoleRecord& a, const PoleRecord& b) { return a.x < b.x; });
    rep.regular = rep.poles.empty();
    return rep;
}

SpectralMatch isospectral_compare(const std::vector<double>& a_in, const std::vector<double>& b,
                                  MatchMode mode, double tol) {
    std::vector<double> a = a_in;
    int a_offset = 0;
    if (mode == MatchMode::drop_lowest_a && !a.empty()) {
        a.erase(a.begin());
        a_offset = 1;
    }

    auto greedy = [&](double shift, SpectralMatch& m) {
        m.pairs.clear();
        m.unmatched_a.clear();
        m.unmatched_b.clear();
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            const double gap = a[i] + shift - b[j];
            if (std::fabs(gap) <= tol) {
                m.pairs.push_back({static_cast<int>(i) + a_offset, static_cast<int>(j),
                                   std::fabs(gap)});
                ++i;
                ++j;
            } else if (gap < 0.0) {
                m.unmatched_a.push_back(static_cast<int>(i) + a_offset);
                ++i;
            } else {
                m.unmatched_b.push_back(static_cast<int>(j));
                ++j;
            }
        }
        for (; i < a.size(); ++i) m.unmatched_a.push_back(static_cast<int>(i) + a_offset);
        for (; j < b.size(); ++j) m.unmatched_b.push_back(static_cast<int>(j));
    };

    // initial shift from the aligned prefix, then re-fit over matched pairs
    SpectralMatch m;
    const std::size_t pre = std::min(a.size(), b.size());
    double shift = 0.0;
    if (pre > 0) {
        std::vector<double> diffs(pre);
        for (std::size_t i = 0; i < pre; ++i) diffs[i] = b[i] - a[i];
        std::sort(diffs.begin(), diffs.end());
        shift = diffs[pre / 2];
    }
    greedy(shift, m);
    if (!m.pairs.empty()) {
        double s = 0.0;
        for (const auto& pr : m.pairs) s += b[pr.index_b] - a[pr.index_a - a_offset];
        shift = s / static_cast<double>(m.pairs.size());
        greedy(shift, m);
    }
    m.shift = shift;
    return m;
}

SpectralMatch isospectral_compare(const SpectrumResult& spec_a, const SpectrumResult& spec_b,
                                  MatchMode mode, double tol) {
    return isospectral_compare(spec_a.eigenvalues, spec_b.eigenvalues, mode, tol);
}

}  // namespace susy
