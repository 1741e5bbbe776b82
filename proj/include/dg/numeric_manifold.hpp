#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "dg/errors.hpp"
#include "dg/integrate.hpp"
#include "dg/manifold.hpp"
#include "dg/polyline.hpp"

namespace dg {

/// Controls for iterated-advection manifold growth.
struct GrowthSettings {
    double seed_length = 1e-6;
    int max_iterations = 60;
    double jacobian_fd = 1e-6;
    IntegratorSettings integrator;
    RefinementPolicy refine;
};

/// Grows the primary stable or unstable manifold of the strobed Poincare
/// map P_t by repeated one-period advection of a short seed segment along
/// the dominant eigendirection, with curve refinement, until the curve's
/// arclength reaches `target_arclength`.  Independent of the O(eps)
/// expansion.  Stable branches grow under P_t^{-1} from the x2=0 anchor,
/// unstable under P_t from the x2=1 anchor.
inline PolylineCurve grow_manifold(ManifoldBranch which, double t,
                                   double target_arclength, const FlowParams& prm,
                                   const GrowthSettings& gs = {}) {
    const bool unstable = (which == ManifoldBranch::Unstable);
    const auto constraint =
        unstable ? FixedPointConstraint::OnX2One : FixedPointConstraint::OnX2Zero;
    const PhasePoint guess{1.0, unstable ? 1.0 : 0.0};
    const PhasePoint fp =
        find_hyperbolic_fixed_point(guess, t, prm, gs.integrator, constraint);

    // Expansion direction: dominant eigenvector of the map actually iterated
    // (P_t for unstable growth, P_t^{-1} for stable).
    const int map_n = unstable ? 1 : -1;
    const IntegratorSettings& st = gs.integrator;
    const double fd = gs.jacobian_fd;
    const auto pm = [&](const PhasePoint& x) { return poincare_map(x, t, map_n, prm, st); };
    const PhasePoint pxp = pm({fp.x1 + fd, fp.x2});
    const PhasePoint pxm = pm({fp.x1 - fd, fp.x2});
    const PhasePoint pyp = pm({fp.x1, fp.x2 + fd});
    const PhasePoint pym = pm({fp.x1, fp.x2 - fd});
    const Mat2 jac{(pxp.x1 - pxm.x1) / (2.0 * fd), (pyp.x1 - pym.x1) / (2.0 * fd),
                   (pxp.x2 - pxm.x2) / (2.0 * fd), (pyp.x2 - pym.x2) / (2.0 * fd)};
    Vec2 dir = dominant_eigenvector(jac);
    // Point into the domain: downward from x2=1, upward from x2=0.
    if ((unstable && dir.y > 0.0) || (!unstable && dir.y < 0.0)) dir = dir * -1.0;

    PolylineCurve curve;
    curve.t = t;
    curve.vertices = {fp, {fp.x1 + gs.seed_length * dir.x, fp.x2 + gs.seed_length * dir.y}};
    curve.recompute_arclengths();

    const double t1 = t + map_n * prm.period();
    for (int it = 0; it < gs.max_iterations; ++it) {
        if (curve.length() >= target_arclength) return curve;
        curve = advect_polyline(curve, t, t1, prm, st, gs.refine);
        curve.vertices.front() = fp;  // pin the anchor against integrator drift
        curve.recompute_arclengths();
    }
    if (curve.length() >= target_arclength) return curve;
    throw NoConvergence("grow_manifold: target arclength not reached within iteration cap");
}

inline PolylineCurve grow_unstable_manifold(double t, double target_arclength,
                                            const FlowParams& prm,
                                            const GrowthSettings& gs = {}) {
    return grow_manifold(ManifoldBranch::Unstable, t, target_arclength, prm, gs);
}

inline PolylineCurve grow_stable_manifold(double t, double target_arclength,
                                          const FlowParams& prm,
                                          const GrowthSettings& gs = {}) {
    return grow_manifold(ManifoldBranch::Stable, t, target_arclength, prm, gs);
}

namespace detail {

/// Extracts the curve's restriction to x2 in [lo, hi] as a graph x1(x2),
/// sorted by ascending x2.  The window must be covered by one contiguous,
/// strictly x2-monotone run of the polyline, else the curve folds there.
inline std::vector<std::pair<double, double>> graph_extract(const PolylineCurve& curve,
                                                            double lo, double hi) {
    const auto& v = curve.vertices;
    if (v.size() < 2) throw NotGraphLike("graph_extract: curve too short");

    auto in_window = [&](std::size_t i) { return v[i].x2 >= lo && v[i].x2 <= hi; };
    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [first, last] in window
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!in_window(i)) continue;
        if (!runs.empty() && runs.back().second + 1 == i)
            runs.back().second = i;
        else
            runs.push_back({i, i});
    }
    if (runs.empty()) throw NotGraphLike("graph_extract: curve misses the window");
    if (runs.size() > 1)
        throw NotGraphLike("graph_extract: curve enters the window more than once");

    auto [first, last] = runs.front();
    std::vector<std::pair<double, double>> pts;
    // Clip the entry/exit segments to the window boundary for full coverage.
    auto clip_to = [&](std::size_t inside, std::size_t outside) {
        const double y0 = v[inside].x2, y1 = v[outside].x2;
        const double yb = (y1 > hi) ? hi : lo;
        if (yb == y0) return;  // vertex sits exactly on the window boundary
        const double s = (yb - y0) / (y1 - y0);
        pts.push_back({yb, v[inside].x1 + s * (v[outside].x1 - v[inside].x1)});
    };
    if (first > 0) clip_to(first, first - 1);
    for (std::size_t i = first; i <= last; ++i) pts.push_back({v[i].x2, v[i].x1});
    if (last + 1 < v.size()) clip_to(last, last + 1);

    bool increasing = pts.back().first > pts.front().first;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = pts[i].first - pts[i - 1].first;
        if ((increasing && d <= 0.0) || (!increasing && d >= 0.0))
            throw NotGraphLike("graph_extract: x2 not strictly monotone in window");
    }
    if (!increasing) std::reverse(pts.begin(), pts.end());
    return pts;
}

/// Linear interpolation of a sorted (x2, x1) graph.
inline double graph_eval(const std::vector<std::pair<double, double>>& g, double x2) {
    auto it = std::lower_bound(g.begin(), g.end(), x2,
                               [](const auto& a, double b) { return a.first < b; });
    if (it == g.begin()) return g.front().second;
    if (it == g.end()) return g.back().second;
    const auto& [y1, x1] = *it;
    const auto& [y0, x0] = *(it - 1);
    const double s = (x2 - y0) / (y1 - y0);
    return x0 + s * (x1 - x0);
}

}  // namespace detail

/// Max over the window of |x1_a(x2) - x1_b(x2)|, with both curves read as
/// graphs x1(x2) by monotone piecewise-linear interpolation.
inline double curve_distance(const PolylineCurve& a, const PolylineCurve& b,
                             double window_lo, double window_hi, int n_samples = 512) {
    const auto ga = detail::graph_extract(a, window_lo, window_hi);
    const auto gb = detail::graph_extract(b, window_lo, window_hi);
    const double lo = std::max(ga.front().first, gb.front().first);
    const double hi = std::min(ga.back().first, gb.back().first);
    if (hi <= lo) throw NotGraphLike("curve_distance: window coverage is empty");
    double worst = 0.0;
    for (int i = 0; i <= n_samples; ++i) {
        const double x2 = lo + (hi - lo) * i / n_samples;
        worst = std::max(worst,
                         std::abs(detail::graph_eval(ga, x2) - detail::graph_eval(gb, x2)));
    }
    return worst;
}

/// x2 locations where the x1-gap between two graph-like curves changes
/// sign over the window (bisection-refined); the transverse-crossing count.
inline std::vector<double> curve_crossings(const PolylineCurve& a, const PolylineCurve& b,
                                           double window_lo, double window_hi,
                                           int n_samples = 2048) {
    const auto ga = detail::graph_extract(a, window_lo, window_hi);
    const auto gb = detail::graph_extract(b, window_lo, window_hi);
    const double lo = std::max(ga.front().first, gb.front().first);
    const double hi = std::min(ga.back().first, gb.back().first);
    auto gap = [&](double x2) { return detail::graph_eval(ga, x2) - detail::graph_eval(gb, x2); };
    std::vector<double> roots;
    double prev_x = lo, prev_g = gap(lo);
    for (int i = 1; i <= n_samples; ++i) {
        const double x = lo + (hi - lo) * i / n_samples;
        const double g = gap(x);
        if (g == 0.0) {  // exact zero on the grid: record it once, directly
            roots.push_back(x);
            prev_x = x;
            prev_g = g;
            continue;
        }
        if (prev_g * g < 0.0) {
            double xa = prev_x, xb = x, fa = prev_g;
            for (int it = 0; it < 60; ++it) {
                const double xm = 0.5 * (xa + xb);
                const double fm = gap(xm);
                if (fa * fm <= 0.0)
                    xb = xm;
                else {
                    xa = xm;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (xa + xb));
        }
        prev_x = x;
        prev_g = g;
    }
    return roots;
}

/// Heteroclinic parameter of the point on the unperturbed manifold at
/// height x2: p = ln(cot(pi x2 / 2)) / (pi^2 A).
inline double parameter_from_x2(double x2, const FlowParams& prm) {
    return std::log(1.0 / std::tan(kPi * x2 / 2.0)) / prm.rate();
}

}  // namespace dg
