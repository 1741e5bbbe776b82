#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "dg/errors.hpp"
#include "dg/flow.hpp"
#include "dg/polyline.hpp"

namespace dg {

/// One connected component of a subject-polygon / convex-window intersection.
struct ClipComponent {
    std::vector<PhasePoint> boundary;  ///< arc pieces inside the window, CCW
    std::vector<bool> touches_edge;    ///< window edges contributing boundary
    double area = 0.0;
};

namespace detail {

inline double cross3(const PhasePoint& o, const PhasePoint& a, const PhasePoint& b) {
    return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1);
}

inline bool inside_convex(const PhasePoint& p, const std::vector<PhasePoint>& poly) {
    const std::size_t e = poly.size();
    for (std::size_t i = 0; i < e; ++i)
        if (cross3(poly[i], poly[(i + 1) % e], p) < 0.0) return false;
    return true;
}

/// Even-odd point-in-polygon for the subject ring, cast with an upward
/// vertical ray.  Advected subject curves are refined finely only near the
/// clip window; a crossing missed in the coarse far field would corrupt
/// parity.  Everything straight above a window point is inside the fine
/// zone, so the upward ray only meets well-sampled parts of the curve.
inline bool inside_polygon(const PhasePoint& p, const std::vector<PhasePoint>& poly) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.x1 > p.x1) != (b.x1 > p.x1) &&
            p.x2 < a.x2 + (b.x2 - a.x2) * (p.x1 - a.x1) / (b.x1 - a.x1))
            in = !in;
    }
    return in;
}

/// Min distance from p to the closed subject ring; used to pick the most
/// robust probe point for even-odd classification.
inline double dist_to_ring(const PhasePoint& p, const std::vector<PhasePoint>& poly) {
    double best = 1e300;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly[j];
        const auto& b = poly[i];
        const double dx = b.x1 - a.x1, dy = b.x2 - a.x2;
        const double len2 = dx * dx + dy * dy;
        double s = len2 > 0.0 ? ((p.x1 - a.x1) * dx + (p.x2 - a.x2) * dy) / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        best = std::min(best, std::hypot(p.x1 - (a.x1 + s * dx), p.x2 - (a.x2 + s * dy)));
    }
    return best;
}

/// Disjoint-set with path halving.
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline double ring_area(const std::vector<PhasePoint>& ring) {
    return polygon_area(ring);
}

/// Intersection of a closed polygonal curve with a convex window polygon
/// under even-odd semantics.  The subject ring is subdivided at its
/// crossings with the window perimeter and every sub-segment is classified
/// by its own midpoint, so each decision is local; maximal inside runs
/// become boundary arcs, and window-perimeter intervals between arc
/// endpoints — classified by an exact orientation rule — glue the arcs into
/// connected components (union-find) with Green's-theorem areas.  No global
/// alternation or ring traversal is relied upon: a locally degenerate
/// contact (grazing needle, resolution bowtie in an advected curve) causes
/// at worst a local, area-negligible misattribution instead of a global
/// parity failure.
///
/// Precondition: the subject must be sampled finer than the window wherever
/// it overlaps it — a chord whose endpoints both lie outside contributes
/// nothing even if its interior cuts a window corner.  Callers should
/// jitter the window (jitter_polygon) when exact tangencies are possible.
inline std::vector<ClipComponent> clip_polygon_convex(std::vector<PhasePoint> subject,
                                                      std::vector<PhasePoint> window) {
    if (subject.size() >= 2 &&
        std::abs(subject.front().x1 - subject.back().x1) < 1e-15 &&
        std::abs(subject.front().x2 - subject.back().x2) < 1e-15)
        subject.pop_back();  // drop duplicated closing vertex
    if (window.size() >= 2 &&
        std::abs(window.front().x1 - window.back().x1) < 1e-15 &&
        std::abs(window.front().x2 - window.back().x2) < 1e-15)
        window.pop_back();
    if (subject.size() < 3 || window.size() < 3) return {};
    if (polygon_area(subject) < 0.0) std::reverse(subject.begin(), subject.end());
    if (polygon_area(window) < 0.0) std::reverse(window.begin(), window.end());
    const std::size_t ns = subject.size();
    const std::size_t ne = window.size();

    // Subdivide the ring at its crossings with the window perimeter, then
    // classify every sub-segment by its own midpoint.
    struct Node {
        PhasePoint pt;
        bool xing = false;  // lies on the window perimeter
        double key = 0.0;   // edge index + u, for perimeter nodes
    };
    std::vector<Node> ring;
    ring.reserve(ns + 8);
    for (std::size_t i = 0; i < ns; ++i) {
        ring.push_back({subject[i]});
        const PhasePoint& a = subject[i];
        const PhasePoint& b = subject[(i + 1) % ns];
        struct X {
            double s, key;
            PhasePoint pt;
        };
        std::vector<X> seg_xs;
        for (std::size_t j = 0; j < ne; ++j) {
            const PhasePoint& c = window[j];
            const PhasePoint& d = window[(j + 1) % ne];
            const double d1x = b.x1 - a.x1, d1y = b.x2 - a.x2;
            const double d2x = d.x1 - c.x1, d2y = d.x2 - c.x2;
            const double den = d1x * d2y - d1y * d2x;
            if (den == 0.0) continue;
            const double s = ((c.x1 - a.x1) * d2y - (c.x2 - a.x2) * d2x) / den;
            const double u = ((c.x1 - a.x1) * d1y - (c.x2 - a.x2) * d1x) / den;
            if (s <= 0.0 || s >= 1.0 || u <= 0.0 || u >= 1.0) continue;
            seg_xs.push_back({s, j + u, {a.x1 + s * d1x, a.x2 + s * d1y}});
        }
        std::sort(seg_xs.begin(), seg_xs.end(), [](const X& l, const X& r) { return l.s < r.s; });
        for (const auto& x : seg_xs) ring.push_back({x.pt, true, x.key});
    }
    const std::size_t nr = ring.size();
    std::vector<bool> seg_in(nr);
    std::size_t n_in = 0;
    for (std::size_t k = 0; k < nr; ++k) {
        const PhasePoint& a = ring[k].pt;
        const PhasePoint& b = ring[(k + 1) % nr].pt;
        seg_in[k] =
            detail::inside_convex({0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)}, window);
        n_in += seg_in[k];
    }
    if (n_in == nr) {
        ClipComponent c;
        c.boundary = subject;
        c.touches_edge.assign(ne, false);
        c.area = polygon_area(c.boundary);
        return {c};
    }
    if (n_in == 0) {
        if (detail::inside_polygon(window[0], subject)) {
            ClipComponent c;
            c.boundary = window;
            c.touches_edge.assign(ne, true);
            c.area = polygon_area(c.boundary);
            return {c};
        }
        return {};
    }

    // Nearest perimeter point, for arc ends that fall on a vertex node
    // (classification flipped without a detected crossing: the curve passes
    // within rounding of the perimeter there).
    auto project = [&](const PhasePoint& a) {
        Node h{window[0], true, 0.0};
        double best_d = 1e300;
        for (std::size_t j = 0; j < ne; ++j) {
            const PhasePoint& c = window[j];
            const PhasePoint& d = window[(j + 1) % ne];
            const double dx = d.x1 - c.x1, dy = d.x2 - c.x2;
            double u = ((a.x1 - c.x1) * dx + (a.x2 - c.x2) * dy) / (dx * dx + dy * dy);
            u = std::clamp(u, 0.0, 1.0);
            const PhasePoint q{c.x1 + u * dx, c.x2 + u * dy};
            const double dist = std::hypot(a.x1 - q.x1, a.x2 - q.x2);
            if (dist < best_d) {
                best_d = dist;
                h = {q, true, j + u};
            }
        }
        return h;
    };

    // Maximal circular runs of inside sub-segments -> arcs.
    struct Arc {
        std::vector<PhasePoint> pts;
        double entry_key = 0.0, exit_key = 0.0;  // edge index + u on the perimeter
    };
    std::vector<Arc> arcs;
    for (std::size_t k = 0; k < nr; ++k) {
        if (!seg_in[k] || seg_in[(k + nr - 1) % nr]) continue;  // run start only
        Arc arc;
        Node start = ring[k].xing ? ring[k] : project(ring[k].pt);
        arc.entry_key = start.key;
        arc.pts.push_back(start.pt);
        std::size_t j = k;
        while (seg_in[j]) {
            j = (j + 1) % nr;
            if (seg_in[j]) arc.pts.push_back(ring[j].pt);
        }
        Node end = ring[j].xing ? ring[j] : project(ring[j].pt);
        arc.exit_key = end.key;
        arc.pts.push_back(end.pt);
        arcs.push_back(std::move(arc));
    }
    const int na = static_cast<int>(arcs.size());

    // Perimeter intervals between consecutive arc endpoints.
    struct PerimPoint {
        double key;
        int arc;
        PhasePoint pt;
        bool is_entry;  // the subject enters the window here
    };
    std::vector<PerimPoint> pp;
    for (int a = 0; a < na; ++a) {
        pp.push_back({arcs[a].entry_key, a, arcs[a].pts.front(), true});
        pp.push_back({arcs[a].exit_key, a, arcs[a].pts.back(), false});
    }
    std::sort(pp.begin(), pp.end(),
              [](const PerimPoint& a, const PerimPoint& b) { return a.key < b.key; });
    const std::size_t m = pp.size();

    const double emax = static_cast<double>(ne);
    auto perim_at = [&](double key) {
        key = std::fmod(key, emax);
        const std::size_t e = static_cast<std::size_t>(key) % ne;
        const double u = key - std::floor(key);
        const PhasePoint& c = window[e];
        const PhasePoint& d = window[(e + 1) % ne];
        return PhasePoint{c.x1 + u * (d.x1 - c.x1), c.x2 + u * (d.x2 - c.x2)};
    };
    // Green's-theorem terms relative to a window vertex: needle components
    // have areas far below the rounding residue of origin-based terms, and
    // a common reference leaves the closed-loop sums exact.
    const PhasePoint ref = window[0];
    auto shoelace = [ref](const PhasePoint& a, const PhasePoint& b) {
        return 0.5 * ((a.x1 - ref.x1) * (b.x2 - ref.x2) - (b.x1 - ref.x1) * (a.x2 - ref.x2));
    };

    detail::UnionFind uf(na);
    std::vector<double> extra_area(na, 0.0);
    std::vector<std::vector<bool>> extra_touch(na, std::vector<bool>(ne, false));
    for (std::size_t k = 0; k < m; ++k) {
        const PerimPoint& p0 = pp[k];
        const PerimPoint& p1 = pp[(k + 1) % m];
        const double k0 = p0.key;
        const double k1 = (k + 1 < m) ? p1.key : p1.key + emax;
        const double gap = std::hypot(p1.pt.x1 - p0.pt.x1, p1.pt.x2 - p0.pt.x2);
        bool joins;
        bool count_geometry = true;
        if (k1 - k0 < 1e-12 || gap < 1e-10) {
            // Sub-rounding interval (grazing contact): connectivity only —
            // a point contact neither adds area nor makes an edge touch.
            joins = true;
            count_geometry = false;
        } else if (p0.is_entry != p1.is_entry) {
            // Orientation rule: for a CCW subject and CCW perimeter walk,
            // the perimeter just after an exit crossing lies left of the
            // curve, i.e. inside the subject; just after an entry it lies
            // right of it, outside.  This is exact and purely local, so one
            // degenerate contact elsewhere cannot flip it.
            joins = !p0.is_entry;
        } else {
            // Endpoint roles disagree (degenerate contact nearby): fall back
            // to an even-odd test at the probe farthest from the subject.
            double best_d = -1.0;
            PhasePoint probe{};
            for (double f : {0.25, 0.5, 0.75}) {
                const PhasePoint q = perim_at(k0 + f * (k1 - k0));
                const double d = detail::dist_to_ring(q, subject);
                if (d > best_d) {
                    best_d = d;
                    probe = q;
                }
            }
            joins = detail::inside_polygon(probe, subject);
        }
        if (!joins) continue;
        uf.unite(p0.arc, p1.arc);
        if (!count_geometry) continue;
        const int root = uf.find(p0.arc);
        extra_touch[root][static_cast<std::size_t>(k0) % ne] = true;
        extra_touch[root][static_cast<std::size_t>(std::fmod(k1, emax)) % ne] = true;
        PhasePoint prev = p0.pt;
        for (double ck = std::floor(k0) + 1.0; ck < k1; ck += 1.0) {
            const std::size_t ci = static_cast<std::size_t>(ck) % ne;  // corner = start of edge ci
            extra_area[root] += shoelace(prev, window[ci]);
            prev = window[ci];
            extra_touch[root][ci] = true;
        }
        extra_area[root] += shoelace(prev, p1.pt);
    }

    // Assemble components per union-find class.
    std::vector<ClipComponent> out;
    std::vector<int> root_slot(na, -1);
    for (int a = 0; a < na; ++a) {
        const int r = uf.find(a);
        if (root_slot[r] < 0) {
            root_slot[r] = static_cast<int>(out.size());
            out.emplace_back();
            out.back().touches_edge.assign(ne, false);
        }
        ClipComponent& comp = out[root_slot[r]];
        const Arc& arc = arcs[a];
        for (std::size_t i = 0; i + 1 < arc.pts.size(); ++i)
            comp.area += shoelace(arc.pts[i], arc.pts[i + 1]);
        comp.boundary.insert(comp.boundary.end(), arc.pts.begin(), arc.pts.end());
    }
    for (int r = 0; r < na; ++r) {
        ClipComponent& comp = out[root_slot[uf.find(r)]];
        comp.area += extra_area[r];
        for (std::size_t j = 0; j < ne; ++j)
            if (extra_touch[r][j]) comp.touches_edge[j] = true;
    }
    // Keep any component that marked an edge touch even when its area
    // rounds to zero or slightly negative (a traversing needle thinner
    // than the area noise floor is still a strip); drop pure residue.
    std::erase_if(out, [](const ClipComponent& c) {
        if (c.area > 0.0) return false;
        for (bool t : c.touches_edge)
            if (t) return false;
        return true;
    });
    for (ClipComponent& c : out) c.area = std::max(c.area, 0.0);
    return out;
}

/// Deterministically perturbs polygon vertices by ~scale to break tangencies.
inline std::vector<PhasePoint> jitter_polygon(const std::vector<PhasePoint>& poly,
                                              std::uint64_t seed, double scale = 1e-12) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<PhasePoint> out = poly;
    for (auto& v : out) {
        v.x1 += scale * u(rng);
        v.x2 += scale * u(rng);
    }
    return out;
}

}  // namespace dg
