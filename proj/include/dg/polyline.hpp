#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dg/errors.hpp"
#include "dg/flow.hpp"
#include "dg/integrate.hpp"

namespace dg {

/// Ordered discrete curve with cumulative chord arclength.  t is the phase
/// time of the snapshot the vertices belong to.
struct PolylineCurve {
    std::vector<PhasePoint> vertices;
    std::vector<double> arclengths;
    double t = 0.0;

    std::size_t size() const { return vertices.size(); }

    void recompute_arclengths() {
        arclengths.resize(vertices.size());
        double s = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (i > 0)
                s += std::hypot(vertices[i].x1 - vertices[i - 1].x1,
                                vertices[i].x2 - vertices[i - 1].x2);
            arclengths[i] = s;
        }
    }

    double length() const { return arclengths.empty() ? 0.0 : arclengths.back(); }
};

/// Controls midpoint insertion while advecting a curve.  A segment of the
/// image is split (by advecting the midpoint of its source segment) while
/// its chord exceeds max_gap or the midpoint sags off the chord by more
/// than the max_angle turn allows.  An optional focus predicate relaxes
/// max_gap by coarse_factor outside the region of interest.
struct RefinementPolicy {
    double max_gap = 1e-3;
    double max_angle = 10.0 * kPi / 180.0;
    std::size_t max_vertices = 2'000'000;
    double coarse_factor = 1.0;
    std::function<bool(const PhasePoint&)> focus;  ///< empty -> everywhere fine

    double gap_at(const PhasePoint& a, const PhasePoint& b) const {
        if (!focus || coarse_factor <= 1.0) return max_gap;
        return (focus(a) || focus(b)) ? max_gap : max_gap * coarse_factor;
    }
};

namespace detail {

struct PolyAdvector {
    const FlowParams& prm;
    const IntegratorSettings& st;
    const RefinementPolicy& refine;
    double t0, t1;
    std::size_t count = 0;

    PhasePoint map(const PhasePoint& x) {
        ++count;
        return advect(x, t0, t1, prm, st);
    }

    /// Emits the open segment (a_img, b_img], subdividing as needed.
    void refine_segment(const PhasePoint& a_src, const PhasePoint& b_src,
                        const PhasePoint& a_img, const PhasePoint& b_img,
                        std::vector<PhasePoint>& out, int depth) {
        const double gap = std::hypot(b_img.x1 - a_img.x1, b_img.x2 - a_img.x2);
        const double tol_gap = refine.gap_at(a_img, b_img);
        bool split = gap > tol_gap;
        PhasePoint m_src{0.5 * (a_src.x1 + b_src.x1), 0.5 * (a_src.x2 + b_src.x2)};
        PhasePoint m_img;
        bool have_mid = false;
        // The turn-angle test only runs at full resolution; coarsened
        // segments are bounded by the gap test alone.
        const bool fine = (tol_gap == refine.max_gap);
        if (!split && fine && depth < 40 && gap > 1e-12) {
            // Sagitta test: deviation of the true midpoint image from the
            // chord implies a turn angle of roughly 8*sag/gap.
            m_img = map(m_src);
            have_mid = true;
            const double cx = 0.5 * (a_img.x1 + b_img.x1);
            const double cy = 0.5 * (a_img.x2 + b_img.x2);
            const double sag = std::hypot(m_img.x1 - cx, m_img.x2 - cy);
            if (sag > 0.125 * refine.max_angle * gap) split = true;
        }
        if (split && depth < 40) {
            if (!have_mid) m_img = map(m_src);
            if (out.size() + 2 > refine.max_vertices)
                throw VertexBudgetExceeded("advect_polyline: vertex budget exceeded");
            refine_segment(a_src, m_src, a_img, m_img, out, depth + 1);
            refine_segment(m_src, b_src, m_img, b_img, out, depth + 1);
            return;
        }
        if (out.size() + 1 > refine.max_vertices)
            throw VertexBudgetExceeded("advect_polyline: vertex budget exceeded");
        out.push_back(b_img);
    }
};

}  // namespace detail

/// Advect every vertex of a curve from t0 to t1, inserting vertices where
/// adjacent images separate or turn too much.  Insertion is resolved by
/// recursive bisection of the source segment, so the result is independent
/// of traversal order.
inline PolylineCurve advect_polyline(const PolylineCurve& curve, double t0, double t1,
                                     const FlowParams& prm,
                                     const IntegratorSettings& st = {},
                                     const RefinementPolicy& refine = {}) {
    if (curve.size() < 2)
        throw std::invalid_argument("advect_polyline: need at least 2 vertices");
    detail::PolyAdvector adv{prm, st, refine, t0, t1};
    PolylineCurve out;
    out.t = t1;
    out.vertices.reserve(curve.size());
    PhasePoint prev_src = curve.vertices.front();
    PhasePoint prev_img = adv.map(prev_src);
    out.vertices.push_back(prev_img);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const PhasePoint src = curve.vertices[i];
        const PhasePoint img = adv.map(src);
        adv.refine_segment(prev_src, src, prev_img, img, out.vertices, 0);
        prev_src = src;
        prev_img = img;
    }
    out.recompute_arclengths();
    return out;
}

/// Shoelace area of a closed polygon (positive when counterclockwise).
inline double polygon_area(const std::vector<PhasePoint>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        s += a.x1 * b.x2 - b.x1 * a.x2;
    }
    return 0.5 * s;
}

}  // namespace dg
