#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dg/errors.hpp"
#include "dg/manifold.hpp"
#include "dg/polyline.hpp"
#include "dg/quadrature.hpp"

namespace dg {

enum class FoldMethod { NewtonDerivative, CurvaturePeak };

/// A detected fold of a manifold curve.
struct FoldPoint {
    double p = std::numeric_limits<double>::quiet_NaN();  ///< NaN for discrete curves
    double s = 0.0;  ///< arclength from the reference point
    PhasePoint position;
    double curvature = 0.0;
    FoldMethod method = FoldMethod::NewtonDerivative;
    int index = 0;  ///< 1 = closest to the reference
};

struct CurvatureProfile {
    struct Sample {
        double s = 0.0;      ///< arclength along the curve
        double kappa = 0.0;  ///< curvature
    };
    std::vector<Sample> samples;
    double reference_s = 0.0;
};

/// Arclength reference parameter used by the fold-spacing diagnostics.
inline constexpr double kDefaultArclengthReferenceP = 41.7151;

inline double curvature_from_sample(const ManifoldSample& m) {
    const double speed2 = m.d1.x * m.d1.x + m.d1.y * m.d1.y;
    if (speed2 < 1e-20)
        throw DegenerateTangent("curvature: tangent vector below 1e-10");
    return std::abs(m.d2.y * m.d1.x - m.d2.x * m.d1.y) / std::pow(speed2, 1.5);
}

/// Curvature of the analytic manifold at parameter p.
inline double curvature(double p, double t, const FlowParams& prm,
                        ManifoldBranch which = ManifoldBranch::Stable,
                        double tol = 1e-12) {
    return curvature_from_sample(manifold_sample(which, p, t, prm, tol));
}

/// |ds/dp| at parameter p.
inline double parametric_speed(double p, double t, const FlowParams& prm,
                               ManifoldBranch which = ManifoldBranch::Stable,
                               double tol = 1e-12) {
    const double d1x = (which == ManifoldBranch::Stable) ? dx1_dp(p, t, prm, tol)
                                                         : dx1_dp(-p, -t, prm, tol);
    return std::hypot(d1x, x2_derivatives(p, prm).first);
}

/// Arclength along the manifold between parameters p1 and p2 (symmetric,
/// non-negative, additive).
inline double arclength(double p1, double p2, double t, const FlowParams& prm,
                        ManifoldBranch which = ManifoldBranch::Stable,
                        double tol = 1e-10) {
    if (p1 == p2) return 0.0;
    const double s = integrate(
        [&](double p) { return parametric_speed(p, t, prm, which, tol * 1e-2); },
        std::min(p1, p2), std::max(p1, p2), tol, kPi / prm.omega());
    return std::abs(s);
}

/// Turning points shallower than this multiple of eps^2 in x1 are below the
/// truncation error of the O(eps) expansion and are not counted as folds.
inline constexpr double kFoldResolutionFactor = 2.0;

/// Zeros of dx1/dp on [p_lo, p_hi], Newton-refined from the cosine-envelope
/// seeds w(p - t) - theta(p) = pi/2 + k pi.  Only marked turning points are
/// kept: the x1 separation from both neighboring turning points (or the
/// anchor) must exceed kFoldResolutionFactor * eps^2, the accuracy limit of
/// the expansion itself.  Returns the first `count` folds ordered by
/// decreasing p (proceeding away from the anchor), each with curvature and
/// arclength from reference_p.
inline std::vector<FoldPoint> find_fold_points(
    double p_lo, double p_hi, double t, const FlowParams& prm, int count,
    ManifoldBranch which = ManifoldBranch::Stable,
    double reference_p = kDefaultArclengthReferenceP, double tol = 1e-12) {
    if (prm.eps() == 0.0)
        throw InsufficientFolds("find_fold_points: dx1/dp vanishes identically at eps=0");

    // Work in the stable manifold's parametrization; the unstable branch is
    // its (p,t) -> (-p,-t) image.
    const double sign = (which == ManifoldBranch::Stable) ? 1.0 : -1.0;
    const double lo = (which == ManifoldBranch::Stable) ? p_lo : -p_hi;
    const double hi = (which == ManifoldBranch::Stable) ? p_hi : -p_lo;
    const double ts = sign * t;
    const double w = prm.omega();

    auto seed_for = [&](int k) {
        // theta(p) varies slowly; 5 fixed-point sweeps suffice.
        double p = 0.5 * (lo + hi);
        for (int it = 0; it < 5; ++it) {
            const double th = envelope(p, prm, tol).theta_p;
            p = ts + (kPi / 2.0 + k * kPi + th) / w;
        }
        return p;
    };

    // Search a padded interval so edge folds have both neighbors available
    // for the resolution test below.
    const double pad = 2.0 * kPi / w;
    const int k_lo = static_cast<int>(std::floor((w * (lo - pad - ts) - kPi) / kPi)) - 2;
    const int k_hi = static_cast<int>(std::ceil((w * (hi + pad - ts) + kPi) / kPi)) + 2;

    std::vector<FoldPoint> folds;
    for (int k = k_lo; k <= k_hi; ++k) {
        double p = seed_for(k);
        if (p < lo - pad - 0.5 * kPi / w || p > hi + pad + 0.5 * kPi / w) continue;
        bool ok = false;
        for (int it = 0; it < 30; ++it) {
            const double g = dx1_dp(p, ts, prm, tol);
            if (std::abs(g) < 1e-9) {
                ok = true;
                break;
            }
            const double gp = d2x1_dp2(p, ts, prm, tol);
            if (gp == 0.0) break;
            const double step = g / gp;
            p -= std::clamp(step, -0.5 * kPi / w, 0.5 * kPi / w);
        }
        if (!ok || p < lo - pad || p > hi + pad) continue;
        const double d2 = d2x1_dp2(p, ts, prm, tol);
        if (d2 == 0.0) continue;  // degenerate turning point
        FoldPoint f;
        f.p = sign * p;
        f.method = FoldMethod::NewtonDerivative;
        const ManifoldSample ms = manifold_sample(which, f.p, t, prm, tol);
        f.position = ms.position;
        f.curvature = curvature_from_sample(ms);
        folds.push_back(f);
    }

    // Decreasing p = away from the stable anchor (mirrored for unstable).
    std::sort(folds.begin(), folds.end(), [&](const FoldPoint& a, const FoldPoint& b) {
        return sign * a.p > sign * b.p;
    });
    // Collapse duplicates within 1e-6, keeping the sharper turning point.
    std::vector<FoldPoint> unique;
    for (const auto& f : folds) {
        if (!unique.empty() && std::abs(unique.back().p - f.p) < 1e-6) {
            const double da = std::abs(d2x1_dp2(sign * unique.back().p, ts, prm, tol));
            const double db = std::abs(d2x1_dp2(sign * f.p, ts, prm, tol));
            if (db > da) unique.back() = f;
            continue;
        }
        unique.push_back(f);
    }

    // Resolution filter: the x1 swing to each neighboring turning point
    // (the anchor, for the innermost) must exceed the expansion's own
    // truncation error, else the "fold" is below the accuracy of the curve.
    const double min_amp = kFoldResolutionFactor * prm.eps() * prm.eps();
    const double anchor_x1 = hyperbolic_trajectory(which, t, prm).x1;
    std::vector<FoldPoint> resolved;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        const double x1 = unique[i].position.x1;
        const double prev = (i == 0) ? anchor_x1 : unique[i - 1].position.x1;
        bool ok = std::abs(x1 - prev) >= min_amp;
        if (i + 1 < unique.size())
            ok = ok && std::abs(x1 - unique[i + 1].position.x1) >= min_amp;
        const double ps = sign * unique[i].p;  // stable-frame parameter
        if (ok && ps >= lo && ps <= hi) resolved.push_back(unique[i]);
    }
    unique = std::move(resolved);

    if (static_cast<int>(unique.size()) < count)
        throw InsufficientFolds("find_fold_points: found " +
                                std::to_string(unique.size()) + " of " +
                                std::to_string(count) + " requested folds");
    unique.resize(count);

    // Cumulative arclength from the reference, built segment by segment.
    // reference_p is given in the stable frame (near that branch's anchor);
    // the unstable branch uses its mirror image so the reference stays on
    // the anchor side, where the envelope integrals are benign.
    const double ref = sign * reference_p;
    double s = arclength(ref, unique.front().p, t, prm, which);
    unique.front().s = s;
    unique.front().index = 1;
    for (std::size_t i = 1; i < unique.size(); ++i) {
        s += arclength(unique[i - 1].p, unique[i].p, t, prm, which);
        unique[i].s = s;
        unique[i].index = static_cast<int>(i) + 1;
    }
    return unique;
}

struct SpacingRegression {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares fit of ln(S_{i+1} - S_i) against the fold index.
inline SpacingRegression fold_spacing_regression(const std::vector<FoldPoint>& folds) {
    if (folds.size() < 3)
        throw DegenerateFit("fold_spacing_regression: need at least 3 folds");
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i < folds.size(); ++i) {
        const double d = folds[i].s - folds[i - 1].s;
        if (d <= 0.0)
            throw DegenerateFit("fold_spacing_regression: non-positive spacing");
        xs.push_back(static_cast<double>(i));
        ys.push_back(std::log(d));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const double denom = (n * sxx - sx * sx) * (n * syy - sy * sy);
    const double r = (n * sxy - sx * sy) / std::sqrt(denom);
    return {slope, intercept, r * r};
}

/// Per-vertex curvature of a discrete curve from the circumscribed circle
/// of each vertex triple; endpoints copy their neighbor.
inline CurvatureProfile discrete_curvature(const PolylineCurve& curve) {
    if (curve.size() < 3)
        throw std::invalid_argument("discrete_curvature: need at least 3 vertices");
    CurvatureProfile prof;
    prof.samples.resize(curve.size());
    const auto& v = curve.vertices;
    for (std::size_t i = 0; i + 2 < curve.size(); ++i) {
        const Vec2 ab{v[i + 1].x1 - v[i].x1, v[i + 1].x2 - v[i].x2};
        const Vec2 bc{v[i + 2].x1 - v[i + 1].x1, v[i + 2].x2 - v[i + 1].x2};
        const Vec2 ac{v[i + 2].x1 - v[i].x1, v[i + 2].x2 - v[i].x2};
        const double denom = ab.norm() * bc.norm() * ac.norm();
        prof.samples[i + 1].kappa = (denom < 1e-30) ? 0.0
                                                    : 2.0 * std::abs(ab.cross(bc)) / denom;
    }
    prof.samples.front().kappa = prof.samples[1].kappa;
    prof.samples.back().kappa = prof.samples[curve.size() - 2].kappa;
    for (std::size_t i = 0; i < curve.size(); ++i)
        prof.samples[i].s = curve.arclengths[i];
    return prof;
}

/// Local maxima of log10(kappa) whose prominence over the surrounding
/// valleys is at least `prominence` decades; ordered by arclength.
inline std::vector<FoldPoint> detect_curvature_peaks(const PolylineCurve& curve,
                                                     const CurvatureProfile& profile,
                                                     double prominence = 0.5) {
    std::vector<FoldPoint> peaks;
    const auto& s = profile.samples;
    const std::size_t n = s.size();
    auto logk = [&](std::size_t i) {
        return std::log10(std::max(s[i].kappa, 1e-300));
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(logk(i) > logk(i - 1) && logk(i) >= logk(i + 1))) continue;
        // Prominence: drop to the lowest valley before a higher point.
        double left_min = logk(i), right_min = logk(i);
        for (std::size_t j = i; j-- > 0;) {
            if (logk(j) > logk(i)) break;
            left_min = std::min(left_min, logk(j));
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (logk(j) > logk(i)) break;
            right_min = std::min(right_min, logk(j));
        }
        if (logk(i) - std::max(left_min, right_min) < prominence) continue;
        FoldPoint f;
        f.s = s[i].s;
        f.curvature = s[i].kappa;
        f.position = curve.vertices[i];
        f.method = FoldMethod::CurvaturePeak;
        f.index = static_cast<int>(peaks.size()) + 1;
        peaks.push_back(f);
    }
    return peaks;
}

}  // namespace dg
