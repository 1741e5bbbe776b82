#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "dg/errors.hpp"
#include "dg/flow.hpp"

namespace dg {

enum class Scheme { RK4Fixed, RK45Adaptive };

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.0;  ///< 0 -> period/20, resolved against FlowParams
    Scheme scheme = Scheme::RK45Adaptive;

    double resolved_max_step(const FlowParams& prm) const {
        return max_step > 0.0 ? max_step : prm.period() / 20.0;
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DP45 {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5,
                                             8.0 / 9, 1.0, 1.0};
    static constexpr std::array<std::array<double, 6>, 7> a{{
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    }};
    static constexpr std::array<double, 7> b5{35.0 / 384,      0.0,  500.0 / 1113,
                                              125.0 / 192,     -2187.0 / 6784,
                                              11.0 / 84,       0.0};
    static constexpr std::array<double, 7> b4{5179.0 / 57600,   0.0,
                                              7571.0 / 16695,   393.0 / 640,
                                              -92097.0 / 339200, 187.0 / 2100,
                                              1.0 / 40};
};

}  // namespace detail

/// Integrate the Double-Gyre flow from (x0, t0) to time t1 (t1 < t0 runs
/// backward).  Adaptive Dormand-Prince 5(4) by default; the step is capped
/// at settings.max_step so the forcing period is always resolved.
inline PhasePoint advect(const PhasePoint& x0, double t0, double t1,
                         const FlowParams& prm,
                         const IntegratorSettings& st = {},
                         Trajectory* dense = nullptr) {
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) return x0;
    const double hmax = st.resolved_max_step(prm);
    PhasePoint x = x0;
    double t = t0;
    if (dense) {
        dense->times.push_back(t);
        dense->points.push_back(x);
    }

    if (st.scheme == Scheme::RK4Fixed) {
        const int n = std::max(1, static_cast<int>(std::ceil(span / hmax)));
        const double h = dir * span / n;
        for (int i = 0; i < n; ++i) {
            const Vec2 k1 = velocity(x, t, prm);
            const Vec2 k2 = velocity({x.x1 + 0.5 * h * k1.x, x.x2 + 0.5 * h * k1.y},
                                     t + 0.5 * h, prm);
            const Vec2 k3 = velocity({x.x1 + 0.5 * h * k2.x, x.x2 + 0.5 * h * k2.y},
                                     t + 0.5 * h, prm);
            const Vec2 k4 = velocity({x.x1 + h * k3.x, x.x2 + h * k3.y}, t + h, prm);
            x.x1 += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
            x.x2 += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
            t = t0 + dir * span * (i + 1.0) / n;
            if (dense) {
                dense->times.push_back(t);
                dense->points.push_back(x);
            }
        }
        return x;
    }

    using T = detail::DP45;
    // Stop once the remaining span is at rounding level: the final clamped
    // step can be a few ulps of t1, which must not trip the underflow guard.
    const double t_done = 4.0 * std::numeric_limits<double>::epsilon() *
                          std::max({std::abs(t0), std::abs(t1), 1.0});
    double h = dir * hmax;
    while (dir * (t1 - t) > t_done) {
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        std::array<Vec2, 7> k;
        for (int i = 0; i < 7; ++i) {
            PhasePoint xi = x;
            for (int j = 0; j < i; ++j) {
                xi.x1 += h * T::a[i][j] * k[j].x;
                xi.x2 += h * T::a[i][j] * k[j].y;
            }
            k[i] = velocity(xi, t + T::c[i] * h, prm);
        }
        PhasePoint x5 = x;
        double e1 = 0.0, e2 = 0.0;
        for (int i = 0; i < 7; ++i) {
            x5.x1 += h * T::b5[i] * k[i].x;
            x5.x2 += h * T::b5[i] * k[i].y;
            e1 += h * (T::b5[i] - T::b4[i]) * k[i].x;
            e2 += h * (T::b5[i] - T::b4[i]) * k[i].y;
        }
        const double scale =
            st.abs_tol + st.rel_tol * std::max({std::abs(x.x1), std::abs(x.x2),
                                                std::abs(x5.x1), std::abs(x5.x2)});
        const double err = std::hypot(e1, e2) / scale;
        if (err <= 1.0) {
            t += h;
            x = x5;
            if (dense) {
                dense->times.push_back(t);
                dense->points.push_back(x);
            }
        }
        const double fac = std::clamp(0.9 * std::pow(err > 0.0 ? 1.0 / err : 1e10, 0.2),
                                      0.2, 5.0);
        h *= fac;
        if (std::abs(h) > hmax) h = dir * hmax;
        if (std::abs(h) < 1e-14)
            throw StepUnderflow("advect: adaptive step fell below 1e-14");
    }
    return x;
}

/// n-th iterate of the strobed Poincare map P_{t0} (negative n inverts).
inline PhasePoint poincare_map(const PhasePoint& x0, double t0, int n,
                               const FlowParams& prm,
                               const IntegratorSettings& st = {}) {
    return advect(x0, t0, t0 + n * prm.period(), prm, st);
}

enum class FixedPointConstraint { Free, OnX2Zero, OnX2One };

/// Hyperbolic fixed point of P_{t0} by Newton iteration with a
/// finite-difference Jacobian.  On the invariant lines x2=0 / x2=1 the
/// search is 1D in x1.
inline PhasePoint find_hyperbolic_fixed_point(
    const PhasePoint& guess, double t0, const FlowParams& prm,
    const IntegratorSettings& st = {},
    FixedPointConstraint constraint = FixedPointConstraint::Free) {
    const double tol = 1e-12;
    const double fd = 1e-7;

    if (constraint != FixedPointConstraint::Free) {
        const double x2 = (constraint == FixedPointConstraint::OnX2Zero) ? 0.0 : 1.0;
        double x1 = guess.x1;
        for (int it = 0; it < 50; ++it) {
            const double r = poincare_map({x1, x2}, t0, 1, prm, st).x1 - x1;
            if (std::abs(r) < tol) return {x1, x2};
            const double rp = poincare_map({x1 + fd, x2}, t0, 1, prm, st).x1 - (x1 + fd);
            const double rm = poincare_map({x1 - fd, x2}, t0, 1, prm, st).x1 - (x1 - fd);
            const double drdx = (rp - rm) / (2.0 * fd);
            x1 -= r / drdx;
        }
        throw NoConvergence("find_hyperbolic_fixed_point: 1D Newton failed");
    }

    PhasePoint x = guess;
    for (int it = 0; it < 50; ++it) {
        const PhasePoint px = poincare_map(x, t0, 1, prm, st);
        const double r1 = px.x1 - x.x1, r2 = px.x2 - x.x2;
        if (std::hypot(r1, r2) < tol) return x;
        const PhasePoint pxp = poincare_map({x.x1 + fd, x.x2}, t0, 1, prm, st);
        const PhasePoint pxm = poincare_map({x.x1 - fd, x.x2}, t0, 1, prm, st);
        const PhasePoint pyp = poincare_map({x.x1, x.x2 + fd}, t0, 1, prm, st);
        const PhasePoint pym = poincare_map({x.x1, x.x2 - fd}, t0, 1, prm, st);
        // Jacobian of P - I
        const double j11 = (pxp.x1 - pxm.x1) / (2.0 * fd) - 1.0;
        const double j12 = (pyp.x1 - pym.x1) / (2.0 * fd);
        const double j21 = (pxp.x2 - pxm.x2) / (2.0 * fd);
        const double j22 = (pyp.x2 - pym.x2) / (2.0 * fd) - 1.0;
        const double det = j11 * j22 - j12 * j21;
        x.x1 -= (j22 * r1 - j12 * r2) / det;
        x.x2 -= (-j21 * r1 + j11 * r2) / det;
    }
    throw NoConvergence("find_hyperbolic_fixed_point: Newton failed");
}

/// Finite-difference Jacobian of the one-period Poincare map at x.
inline Mat2 poincare_jacobian(const PhasePoint& x, double t0, const FlowParams& prm,
                              const IntegratorSettings& st = {}, double fd = 1e-6) {
    const PhasePoint pxp = poincare_map({x.x1 + fd, x.x2}, t0, 1, prm, st);
    const PhasePoint pxm = poincare_map({x.x1 - fd, x.x2}, t0, 1, prm, st);
    const PhasePoint pyp = poincare_map({x.x1, x.x2 + fd}, t0, 1, prm, st);
    const PhasePoint pym = poincare_map({x.x1, x.x2 - fd}, t0, 1, prm, st);
    return {(pxp.x1 - pxm.x1) / (2.0 * fd), (pyp.x1 - pym.x1) / (2.0 * fd),
            (pxp.x2 - pxm.x2) / (2.0 * fd), (pyp.x2 - pym.x2) / (2.0 * fd)};
}

/// Dominant eigenvector of a 2x2 matrix (largest |eigenvalue|).
inline Vec2 dominant_eigenvector(const Mat2& m, double* eigenvalue = nullptr) {
    const double tr = m.a11 + m.a22;
    const double det = m.a11 * m.a22 - m.a12 * m.a21;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double l1 = tr / 2.0 + disc;
    const double l2 = tr / 2.0 - disc;
    const double l = (std::abs(l1) >= std::abs(l2)) ? l1 : l2;
    if (eigenvalue) *eigenvalue = l;
    Vec2 v{m.a12, l - m.a11};
    if (v.norm() < 1e-14) v = {l - m.a22, m.a21};
    if (v.norm() < 1e-14) v = {1.0, 0.0};
    return v * (1.0 / v.norm());
}

}  // namespace dg
