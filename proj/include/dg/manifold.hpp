#pragma once

#include <cmath>
#include <utility>

#include "dg/flow.hpp"
#include "dg/melnikov.hpp"
#include "dg/quadrature.hpp"
#include "dg/special.hpp"

namespace dg {

enum class ManifoldBranch { Stable, Unstable };

/// One point of the O(eps) parametric manifold curve, with p-derivatives.
struct ManifoldSample {
    double p = 0.0;
    PhasePoint position;
    Vec2 d1;  ///< (dx1/dp, dx2/dp)
    Vec2 d2;  ///< (d2x1/dp2, d2x2/dp2)
    double t = 0.0;
    bool trusted = true;  ///< false when p is outside the trusted window
};

/// Amplitude/phase form of dx1/dp = J(p) cos(w (p - t) - theta(p)).
struct EnvelopeData {
    double J = 0.0;
    double theta_p = 0.0;
};

/// Default trusted parameter window: the expansion degrades as the manifold
/// leaves the vicinity of x1 = 1, so stable is trusted on [-1.5, inf) and
/// unstable on (-inf, 1.5].
inline constexpr double kTrustedPMin = -1.5;
inline constexpr double kTrustedPMax = 1.5;

/// O(eps) hyperbolic trajectory location at time t.  Stable anchor lives on
/// x2 = 0, unstable on x2 = 1; the two differ only by theta -> -theta.
inline PhasePoint hyperbolic_trajectory(ManifoldBranch which, double t,
                                        const FlowParams& prm) {
    const double th = prm.theta();
    const double sign = (which == ManifoldBranch::Stable) ? 1.0 : -1.0;
    const double x1 =
        1.0 + prm.eps() * std::cos(th) * std::sin(prm.omega() * t + sign * th);
    return {x1, (which == ManifoldBranch::Stable) ? 0.0 : 1.0};
}

namespace detail {

/// Integration cutoff for the manifold integrands: cosh(a p)/cosh(a tau)
/// has decayed below 1e-17 once |tau| exceeds |p| + 40/a.
inline double manifold_cutoff(double p, const FlowParams& prm) {
    return std::abs(p) + 40.0 / prm.rate();
}

/// x1 offset of the stable manifold (the eps * integral term), direct form.
inline double stable_x1_offset(double p, double t, const FlowParams& prm, double tol) {
    const double a = prm.rate();
    const double vmax = manifold_cutoff(p, prm);
    const double integral = integrate(
        [&](double tau) {
            return cosh_ratio(a * p, a * tau) * std::tanh(a * tau) *
                   std::sin(prm.omega() * (tau + t - p));
        },
        p, vmax, tol, kPi / prm.omega());
    return prm.eps() * a * integral;
}

/// Same offset via the integration-by-parts recast (sech * cos form).
inline double stable_x1_offset_recast(double p, double t, const FlowParams& prm,
                                      double tol) {
    const double a = prm.rate();
    const double umax = t - p + manifold_cutoff(p, prm);
    const double integral = integrate(
        [&](double u) {
            return cosh_ratio(a * p, a * (u - t + p)) * std::cos(prm.omega() * u);
        },
        t, umax, tol, kPi / prm.omega());
    return prm.eps() * (std::sin(prm.omega() * t) + prm.omega() * integral);
}

/// f1(v,p) of the envelope form, stabilized:
/// eps w a cosh(a p) sech(a v) [tanh(a p) - tanh(a v)].
inline double envelope_f1(double v, double p, const FlowParams& prm) {
    return prm.eps() * prm.omega() * prm.rate() *
           tanh_gap_core(prm.rate() * p, prm.rate() * v);
}

}  // namespace detail

/// Closed-form p-derivatives of x2(p) = (2/pi) acot(exp(a p)).
inline std::pair<double, double> x2_derivatives(double p, const FlowParams& prm) {
    const double a = prm.rate();
    const double s = sech(a * p);
    return {-kPi * prm.A() * s,
            kPi * kPi * kPi * prm.A() * prm.A() * s * std::tanh(a * p)};
}

/// Amplitude J(p) and phase theta(p) of dx1/dp.
inline EnvelopeData envelope(double p, const FlowParams& prm, double tol = 1e-12) {
    const double vmax = detail::manifold_cutoff(p, prm);
    const double c = integrate(
        [&](double v) { return detail::envelope_f1(v, p, prm) * std::cos(prm.omega() * v); },
        p, vmax, tol, kPi / prm.omega());
    const double s = integrate(
        [&](double v) { return detail::envelope_f1(v, p, prm) * std::sin(prm.omega() * v); },
        p, vmax, tol, kPi / prm.omega());
    return {std::hypot(c, s), std::atan2(s, c)};
}

/// dx1/dp of the stable manifold via the envelope form.
inline double dx1_dp(double p, double t, const FlowParams& prm, double tol = 1e-12) {
    const EnvelopeData e = envelope(p, prm, tol);
    return e.J * std::cos(prm.omega() * (p - t) - e.theta_p);
}

/// dx1/dp by direct quadrature of the derivative integral; independent
/// route used to validate the envelope form.
inline double dx1_dp_direct(double p, double t, const FlowParams& prm,
                            double tol = 1e-12) {
    const double umax = t - p + detail::manifold_cutoff(p, prm);
    return integrate(
        [&](double u) {
            return detail::envelope_f1(u - t + p, p, prm) * std::cos(prm.omega() * u);
        },
        t, umax, tol, kPi / prm.omega());
}

/// d2x1/dp2 of the stable manifold (two-term quadrature form).
inline double d2x1_dp2(double p, double t, const FlowParams& prm, double tol = 1e-12) {
    const double a = prm.rate();
    const double tp = std::tanh(a * p);
    const double umax = t - p + detail::manifold_cutoff(p, prm);
    const double integral = integrate(
        [&](double u) {
            const double v = u - t + p;
            const double tv = std::tanh(a * v);
            const double core = tanh_gap_core(a * p, a * v);
            // cosh sech (tv - tp)(2 tv + tp) + tanh(ap) * cosh sech (tp - tv)
            const double term1 = -core * (2.0 * tv + tp);
            const double term2 = tp * core;
            return (term1 + term2) * std::cos(prm.omega() * u);
        },
        t, umax, tol, kPi / prm.omega());
    return prm.eps() * prm.omega() * a * a * integral;
}

/// Stable-manifold point at parameter p, time t, with p-derivatives.
inline ManifoldSample stable_manifold_sample(double p, double t, const FlowParams& prm,
                                             double tol = 1e-12,
                                             double p_min = kTrustedPMin) {
    ManifoldSample s;
    s.p = p;
    s.t = t;
    s.trusted = (p >= p_min);
    s.position = {1.0 + detail::stable_x1_offset(p, t, prm, tol),
                  heteroclinic_x2(p, prm)};
    const auto [d2x, dd2x] = x2_derivatives(p, prm);
    s.d1 = {dx1_dp(p, t, prm, tol), d2x};
    s.d2 = {d2x1_dp2(p, t, prm, tol), dd2x};
    return s;
}

/// Unstable-manifold point.  The unstable branch is the image of the stable
/// one under (p,t) -> (-p,-t) with the x1 offset negated, which the direct
/// substitution tau -> -tau in its defining integral shows.
inline ManifoldSample unstable_manifold_sample(double p, double t, const FlowParams& prm,
                                               double tol = 1e-12,
                                               double p_max = kTrustedPMax) {
    ManifoldSample s;
    s.p = p;
    s.t = t;
    s.trusted = (p <= p_max);
    s.position = {1.0 - detail::stable_x1_offset(-p, -t, prm, tol),
                  heteroclinic_x2(p, prm)};
    const auto [d2x, dd2x] = x2_derivatives(p, prm);
    s.d1 = {dx1_dp(-p, -t, prm, tol), d2x};
    s.d2 = {-d2x1_dp2(-p, -t, prm, tol), dd2x};
    return s;
}

inline ManifoldSample manifold_sample(ManifoldBranch which, double p, double t,
                                      const FlowParams& prm, double tol = 1e-12) {
    return which == ManifoldBranch::Stable ? stable_manifold_sample(p, t, prm, tol)
                                           : unstable_manifold_sample(p, t, prm, tol);
}

/// Position-only evaluation (cheaper; skips the derivative quadratures).
inline PhasePoint manifold_point(ManifoldBranch which, double p, double t,
                                 const FlowParams& prm, double tol = 1e-12) {
    if (which == ManifoldBranch::Stable)
        return {1.0 + detail::stable_x1_offset(p, t, prm, tol), heteroclinic_x2(p, prm)};
    return {1.0 - detail::stable_x1_offset(-p, -t, prm, tol), heteroclinic_x2(p, prm)};
}

/// Recast (integration-by-parts) route to the same position; must agree
/// with manifold_point to quadrature tolerance.
inline PhasePoint manifold_point_recast(ManifoldBranch which, double p, double t,
                                        const FlowParams& prm, double tol = 1e-12) {
    if (which == ManifoldBranch::Stable)
        return {1.0 + detail::stable_x1_offset_recast(p, t, prm, tol),
                heteroclinic_x2(p, prm)};
    return {1.0 - detail::stable_x1_offset_recast(-p, -t, prm, tol),
            heteroclinic_x2(p, prm)};
}

/// Reciprocal slope dx1/dx2 of the manifold at parameter p.
inline double slope_estimate(ManifoldBranch which, double p, double t,
                             const FlowParams& prm, double tol = 1e-12) {
    const double num = (which == ManifoldBranch::Stable)
                           ? dx1_dp(p, t, prm, tol)
                           : dx1_dp(-p, -t, prm, tol);
    return num / x2_derivatives(p, prm).first;
}

/// O(eps) reciprocal slope at the anchor itself: exactly zero (the manifold
/// emanates vertically to first order; the true slope is O(eps^2)).
inline double emanation_slope(ManifoldBranch /*which*/, double /*t*/,
                              const FlowParams& /*prm*/) {
    return 0.0;
}

}  // namespace dg
