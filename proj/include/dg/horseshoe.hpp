#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dg/clip.hpp"
#include "dg/errors.hpp"
#include "dg/integrate.hpp"
#include "dg/manifold.hpp"
#include "dg/numeric_manifold.hpp"
#include "dg/polyline.hpp"

namespace dg {

/// Convex region hugging the primary unstable manifold below its anchor on
/// x2 = 1.  Vertices run counterclockwise TL, BL, BR, TR, AP: the left edge
/// drops vertically just left of the manifold's leftmost wander (so the
/// image strip that keeps hugging the manifold — the trunk — stays inside
/// the region under every iterate), AP puts the anchor on the top edge, and
/// the TR-AP piece of the top tilts down toward the right so re-entering
/// lobes cross it on their way down.
struct RegionA {
    std::vector<PhasePoint> poly;  ///< TL, BL, BR, TR, AP (CCW)
    double t = 0.0;
    double delta = 0.05;
    double height = 0.5;
    double top_drop = 0.4;

    static constexpr std::size_t kBottomEdge = 1;  ///< BL -> BR
    static bool is_top_edge(std::size_t j) { return j == 3 || j == 4; }

    /// A clipped component is a full-traversal strip when its boundary has
    /// pieces of both the bottom edge and a top edge.
    bool traverses(const ClipComponent& c) const {
        if (!c.touches_edge[kBottomEdge]) return false;
        for (std::size_t j = 0; j < c.touches_edge.size(); ++j)
            if (is_top_edge(j) && c.touches_edge[j]) return true;
        return false;
    }

    PolylineCurve boundary() const {
        PolylineCurve c;
        c.t = t;
        c.vertices = poly;
        c.vertices.push_back(poly.front());
        c.recompute_arclengths();
        return c;
    }
    double area() const { return polygon_area(poly); }
};

/// Builds the region A of the horseshoe construction at phase t: from just
/// left of the primary unstable manifold to delta right of its anchor,
/// extending down by `height`.  The manifold's wander is measured on a
/// numerically grown curve (pass one in to reuse it, else one is grown
/// here); GeometryFailure if it escapes right of the anchor by more than
/// delta over the region's height, i.e. the lobes cannot be cleared.
inline RegionA build_region_A(double t, double delta, const FlowParams& prm,
                              double height = 0.5, double top_drop = 0.4,
                              const PolylineCurve* manifold = nullptr) {
    if (delta <= 0.0 || height <= 0.0 || top_drop <= 0.0 || top_drop >= height)
        throw GeometryFailure("build_region_A: need 0 < top_drop < height and delta > 0");
    const PhasePoint anchor = hyperbolic_trajectory(ManifoldBranch::Unstable, t, prm);

    double x_min = anchor.x1, x_max = anchor.x1;
    if (prm.eps() > 0.0) {
        PolylineCurve grown;
        if (!manifold) {
            grown = grow_unstable_manifold(t, 2.0 * height + 0.05, prm);
            manifold = &grown;
        }
        for (const PhasePoint& v : manifold->vertices) {
            if (v.x2 < 1.0 - height - 0.02) continue;
            x_min = std::min(x_min, v.x1);
            x_max = std::max(x_max, v.x1);
        }
    }
    if (x_max >= anchor.x1 + delta)
        throw GeometryFailure("build_region_A: manifold crosses the right edge");

    RegionA A;
    A.t = t;
    A.delta = delta;
    A.height = height;
    A.top_drop = top_drop;
    // The TL-AP piece of the top edge lies exactly on the invariant line
    // x2 = 1 with AP at the anchor itself.  This is what keeps the trunk
    // strip countable at large n: material exactly on x2 = 1 stays there
    // while sliding into the anchor, so P^n(A) always pokes a (shrinking
    // but exactly-on-the-line) cap through the region's top edge.  Any
    // positive inset h would instead sink the cap to depth h*e^{aTn} and
    // lose the trunk after a few periods.
    const double left_pad = 1e-4;
    const double left_x = x_min - left_pad;
    A.poly = {PhasePoint{left_x, 1.0},
              PhasePoint{left_x, 1.0 - height},
              PhasePoint{anchor.x1 + delta, 1.0 - height},
              PhasePoint{anchor.x1 + delta, 1.0 - top_drop},
              PhasePoint{anchor.x1, 1.0}};
    return A;
}

struct StripCountResult {
    int n = 0;
    int strips = 0;
    double area_A = 0.0;
    double area_image = 0.0;   ///< signed shoelace of the (possibly coarse) image
    double area_clip = 0.0;
    std::size_t vertices = 0;  ///< image-boundary vertex count
    bool budget_exceeded = false;
    std::vector<ClipComponent> components;
};

/// Default refinement for horseshoe runs: fine inside an inflated box
/// around A, coarse elsewhere.  The focus margin exceeds the coarse gap so
/// no coarse segment can skip across the box undetected.
inline RefinementPolicy horseshoe_refinement(const RegionA& A, double max_gap = 2e-4,
                                             double coarse_factor = 150.0,
                                             std::size_t max_vertices = 2'000'000,
                                             double margin = 0.1) {
    RefinementPolicy r;
    r.max_gap = max_gap;
    r.coarse_factor = coarse_factor;
    r.max_vertices = max_vertices;
    double x1_lo = 1e300, x1_hi = -1e300, x2_lo = 1e300;
    for (const PhasePoint& v : A.poly) {
        x1_lo = std::min(x1_lo, v.x1);
        x1_hi = std::max(x1_hi, v.x1);
        x2_lo = std::min(x2_lo, v.x2);
    }
    x1_lo -= margin;
    x1_hi += margin;
    x2_lo -= margin;
    r.focus = [=](const PhasePoint& p) {
        return p.x1 >= x1_lo && p.x1 <= x1_hi && p.x2 >= x2_lo;
    };
    return r;
}

/// Advects the boundary of A through n forcing periods (a single P^n map
/// per refined source point, so refinement bisects the exact initial
/// boundary) and counts connected components of P^n(A) intersect A whose
/// boundary includes pieces of both the top and the bottom edge of A.
inline StripCountResult strip_count(const RegionA& A, int n, const FlowParams& prm,
                                    const IntegratorSettings& st = {},
                                    const RefinementPolicy& refine = {},
                                    std::uint64_t jitter_seed = 20240819) {
    if (n < 1) throw std::invalid_argument("strip_count: need n >= 1");
    StripCountResult res;
    res.n = n;
    res.area_A = A.area();
    PolylineCurve image;
    try {
        image = advect_polyline(A.boundary(), A.t, A.t + n * prm.period(), prm, st, refine);
    } catch (const VertexBudgetExceeded&) {
        res.budget_exceeded = true;
        return res;
    }
    res.vertices = image.size();
    res.area_image = std::abs(polygon_area(image.vertices));

    // Jitter the clip window, then pull its top edge a hair inside the
    // invariant line: the advected boundary's trunk cap lies exactly on
    // x2 = 1, and clipping against an edge slightly below it turns that
    // grazing contact into two clean crossings regardless of jitter sign.
    auto window = jitter_polygon(A.poly, jitter_seed);
    for (PhasePoint& v : window) v.x2 = std::min(v.x2, 1.0 - 1e-12);
    const auto comps = clip_polygon_convex(image.vertices, window);
    for (const auto& c : comps) {
        res.area_clip += c.area;
        if (A.traverses(c)) ++res.strips;
    }
    res.components = comps;
    return res;
}

struct HorseshoeSweep {
    std::vector<StripCountResult> rows;
    int first_n_with_two = -1;  ///< smallest n with >= 2 strips, -1 if none
};

/// Runs strip_count for n = 1..n_max, stopping early if the vertex budget
/// is exhausted (larger n only grows the image further).
inline HorseshoeSweep horseshoe_sweep(const RegionA& A, int n_max, const FlowParams& prm,
                                      const IntegratorSettings& st = {},
                                      const RefinementPolicy& refine = {},
                                      std::uint64_t jitter_seed = 20240819) {
    HorseshoeSweep sweep;
    for (int n = 1; n <= n_max; ++n) {
        StripCountResult r = strip_count(A, n, prm, st, refine, jitter_seed);
        sweep.rows.push_back(r);
        if (r.budget_exceeded) break;
        if (r.strips >= 2 && sweep.first_n_with_two < 0) sweep.first_n_with_two = n;
    }
    return sweep;
}

}  // namespace dg
