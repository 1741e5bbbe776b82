#pragma once

#include <algorithm>
#include <cmath>

#include "dg/flow.hpp"
#include "dg/quadrature.hpp"
#include "dg/special.hpp"

namespace dg {

enum class MelnikovMethod { ClosedForm, Quadrature };

struct MelnikovResult {
    double value = 0.0;
    double p = 0.0;
    double t = 0.0;
    MelnikovMethod method = MelnikovMethod::Quadrature;
};

namespace detail {

/// Wedge integrand pi^3 A^2 tanh(a tau) sech(a tau) sin(w (tau + shift)),
/// where a = pi^2 A and shift = t - p.
inline double wedge_integrand(double tau, double shift, const FlowParams& prm) {
    const double a = prm.rate();
    return kPi * kPi * kPi * prm.A() * prm.A() * std::tanh(a * tau) * sech(a * tau) *
           std::sin(prm.omega() * (tau + shift));
}

/// |tanh sech| < 1e-16 beyond this, so improper integrals are truncated here.
inline double wedge_cutoff(const FlowParams& prm) { return 40.0 / prm.rate(); }

}  // namespace detail

/// Amplitude R(w) = w sech(w / (2 pi A)) of the closed-form Melnikov function.
inline double melnikov_amplitude(const FlowParams& prm) {
    return prm.omega() * sech(prm.omega() / (2.0 * kPi * prm.A()));
}

/// M(p,t) = R(w) cos(w (t - p)).  The wedge integrand tanh * sech is odd,
/// so the surviving term of the trig split of sin(w (tau + t - p)) is the
/// one proportional to cos(w (t - p)); zeros sit at p = t - (m + 1/2) pi/w.
inline MelnikovResult melnikov_closed(double p, double t, const FlowParams& prm) {
    return {melnikov_amplitude(prm) * std::cos(prm.omega() * (t - p)), p, t,
            MelnikovMethod::ClosedForm};
}

/// m-th zero of M(p, t) in p, counting toward -infinity from t.
inline double melnikov_zero(int m, double t, const FlowParams& prm) {
    return t - (static_cast<double>(m) + 0.5) * kPi / prm.omega();
}

/// Full Melnikov function by quadrature of the wedge integral over R.
inline MelnikovResult melnikov_full(double p, double t, const FlowParams& prm,
                                    MelnikovMethod method = MelnikovMethod::Quadrature,
                                    double tol = 1e-10) {
    if (method == MelnikovMethod::ClosedForm) return melnikov_closed(p, t, prm);
    const double cut = detail::wedge_cutoff(prm);
    const double shift = t - p;
    const double value = integrate(
        [&](double tau) { return detail::wedge_integrand(tau, shift, prm); }, -cut, cut,
        tol, kPi / prm.omega());
    return {value, p, t, MelnikovMethod::Quadrature};
}

/// M^s(p,t): wedge integral over [p, infinity).
inline MelnikovResult melnikov_stable(double p, double t, const FlowParams& prm,
                                      double tol = 1e-10) {
    const double cut = detail::wedge_cutoff(prm);
    const double shift = t - p;
    double value = 0.0;
    if (p < cut) {
        value = integrate(
            [&](double tau) { return detail::wedge_integrand(tau, shift, prm); },
            std::max(p, -cut), cut, tol, kPi / prm.omega());
    }
    return {value, p, t, MelnikovMethod::Quadrature};
}

/// M^u(p,t): wedge integral over (-infinity, p].
inline MelnikovResult melnikov_unstable(double p, double t, const FlowParams& prm,
                                        double tol = 1e-10) {
    const double cut = detail::wedge_cutoff(prm);
    const double shift = t - p;
    double value = 0.0;
    if (p > -cut) {
        value = integrate(
            [&](double tau) { return detail::wedge_integrand(tau, shift, prm); }, -cut,
            std::min(p, cut), tol, kPi / prm.omega());
    }
    return {value, p, t, MelnikovMethod::Quadrature};
}

/// Signed x1-distance from the stable to the unstable manifold through the
/// heteroclinic point at parameter p: eps M(p,t) / |f(xbar(p))|, positive
/// toward +x1.  Leading order in eps; meaningful for small eps only.
inline double signed_distance(double p, double t, const FlowParams& prm) {
    const double speed = kPi * prm.A() * sech(prm.rate() * p);
    return prm.eps() * melnikov_closed(p, t, prm).value / speed;
}

struct FluxQuantities {
    double average_flux = 0.0;  ///< eps R(w)
    double lobe_area = 0.0;     ///< eps R(w) 2 pi / w
};

inline FluxQuantities flux_quantities(const FlowParams& prm) {
    const double f = prm.eps() * melnikov_amplitude(prm);
    return {f, f * 2.0 * kPi / prm.omega()};
}

/// Tangential perturbation term B^s(p,t).  Evaluated from the general
/// formula with the |f(xbar(p))|^2 prefactor folded into the integrand as
/// the ratio (sech(a p) cosh(a tau))^2, which keeps the integrand bounded.
/// For the Double-Gyre R^s and f.g vanish identically, so this is a
/// machine-zero quadrature.
inline double tangential_term_Bs(double p, double t, const FlowParams& prm,
                                 double tol = 1e-12) {
    const double a = prm.rate();
    auto rs = [&](double xi) {
        const PhasePoint xb = unperturbed_heteroclinic(xi, prm);
        const Vec2 f = steady_velocity(xb, prm);
        const Vec2 fp{-f.y, f.x};
        const Mat2 J = steady_jacobian(xb, prm);
        // fp^T (J^T + J) f
        const double v1 = 2.0 * J.a11 * f.x + (J.a12 + J.a21) * f.y;
        const double v2 = (J.a12 + J.a21) * f.x + 2.0 * J.a22 * f.y;
        return (fp.x * v1 + fp.y * v2) / f.dot(f);
    };
    auto integrand = [&](double tau) {
        const double time_arg = tau + t - p;
        const PhasePoint xb = unperturbed_heteroclinic(tau, prm);
        const Vec2 f = steady_velocity(xb, prm);
        const Vec2 g = perturbation_velocity(xb, time_arg, prm);
        const double num =
            rs(tau) * melnikov_stable(p, time_arg, prm, tol).value + f.dot(g);
        // |f(xbar(p))|^2 / |f(xbar(tau))|^2
        const double ratio = cosh_ratio(a * tau, a * p);
        return num * ratio * ratio;
    };
    return integrate(integrand, 0.0, p, tol, kPi / prm.omega());
}

}  // namespace dg
