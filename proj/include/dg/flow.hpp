#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dg/errors.hpp"

namespace dg {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// A position in the gyre domain Omega = [0,2] x [0,1].  Evaluators accept
/// points outside Omega as well; membership is a query, never enforced.
struct PhasePoint {
    double x1 = 0.0;
    double x2 = 0.0;

    bool in_domain(double slack = 0.0) const {
        return x1 >= -slack && x1 <= 2.0 + slack && x2 >= -slack && x2 <= 1.0 + slack;
    }
    Vec2 to_vec() const { return {x1, x2}; }
};

/// Parameters (A, eps, omega) of the unsteady Double-Gyre, plus the derived
/// phase angle theta = atan(omega / (A pi^2)) which appears throughout the
/// perturbation formulas.
class FlowParams {
  public:
    FlowParams(double A, double eps, double omega) : A_(A), eps_(eps), omega_(omega) {
        if (!(A > 0.0)) throw std::invalid_argument("FlowParams: A must be > 0");
        if (!(eps >= 0.0)) throw std::invalid_argument("FlowParams: eps must be >= 0");
        if (!(omega > 0.0)) throw std::invalid_argument("FlowParams: omega must be > 0");
        theta_ = std::atan(omega / (A * kPi * kPi));
    }

    double A() const { return A_; }
    double eps() const { return eps_; }
    double omega() const { return omega_; }
    double theta() const { return theta_; }
    double period() const { return 2.0 * kPi / omega_; }

    /// pi^2 A, the exponential rate of the unperturbed heteroclinic.
    double rate() const { return kPi * kPi * A_; }

    /// The analytic O(eps) expansions assume the quadratic phi stays
    /// monotone on [0,2], which requires eps < 1/2.
    bool expansion_valid() const { return eps_ < 0.5; }

  private:
    double A_;
    double eps_;
    double omega_;
    double theta_;
};

/// phi(x1,t) = eps sin(wt) x1^2 + (1 - 2 eps sin(wt)) x1.
/// Fixes the endpoints: phi(0,t)=0 and phi(2,t)=2 for every t and eps.
inline double phi(double x1, double t, const FlowParams& prm) {
    const double s = prm.eps() * std::sin(prm.omega() * t);
    return s * x1 * x1 + (1.0 - 2.0 * s) * x1;
}

inline double dphi_dx1(double x1, double t, const FlowParams& prm) {
    const double s = prm.eps() * std::sin(prm.omega() * t);
    return 2.0 * s * x1 + 1.0 - 2.0 * s;
}

/// Velocity field of the Double-Gyre.  Defined on all of R^2; the boundary
/// of Omega is invariant (zero normal component) for every t and eps.
inline Vec2 velocity(const PhasePoint& x, double t, const FlowParams& prm) {
    const double ph = phi(x.x1, t, prm);
    const double piA = kPi * prm.A();
    return {-piA * std::sin(kPi * ph) * std::cos(kPi * x.x2),
            piA * std::cos(kPi * ph) * std::sin(kPi * x.x2) * dphi_dx1(x.x1, t, prm)};
}

/// Steady part f of the split xdot = f + eps g + O(eps^2).
inline Vec2 steady_velocity(const PhasePoint& x, const FlowParams& prm) {
    const double piA = kPi * prm.A();
    return {-piA * std::sin(kPi * x.x1) * std::cos(kPi * x.x2),
            piA * std::cos(kPi * x.x1) * std::sin(kPi * x.x2)};
}

/// First-order perturbation g; proportional to sin(wt).
inline Vec2 perturbation_velocity(const PhasePoint& x, double t, const FlowParams& prm) {
    const double s = std::sin(prm.omega() * t);
    const double q = x.x1 * x.x1 - 2.0 * x.x1;
    const double cx = std::cos(kPi * x.x1);
    const double sx = std::sin(kPi * x.x1);
    const double g1 = -kPi * kPi * prm.A() * q * std::cos(kPi * x.x2) * cx;
    const double g2 =
        kPi * prm.A() * std::sin(kPi * x.x2) * (2.0 * cx * (x.x1 - 1.0) - kPi * q * sx);
    return {g1 * s, g2 * s};
}

struct VelocitySplit {
    Vec2 f;  ///< steady part, independent of t
    Vec2 g;  ///< first-order part, proportional to sin(wt)

    /// The dropped remainder is O(eps^2), uniformly on Omega.
    static constexpr int remainder_order = 2;
};

inline VelocitySplit velocity_split(const PhasePoint& x, double t, const FlowParams& prm) {
    return {steady_velocity(x, prm), perturbation_velocity(x, t, prm)};
}

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};

/// Jacobian of the steady part f, from the analytic partials.
inline Mat2 steady_jacobian(const PhasePoint& x, const FlowParams& prm) {
    const double c = kPi * kPi * prm.A();
    const double sx = std::sin(kPi * x.x1), cx = std::cos(kPi * x.x1);
    const double sy = std::sin(kPi * x.x2), cy = std::cos(kPi * x.x2);
    return {-c * cx * cy, c * sx * sy, -c * sx * sy, c * cx * cy};
}

/// Divergence of the velocity field from the analytic partials.  The two
/// terms cancel exactly; the sum is returned rather than a hard zero so the
/// incompressibility tests exercise the actual derivative expressions.
inline double divergence(const PhasePoint& x, double t, const FlowParams& prm) {
    const double ph = phi(x.x1, t, prm);
    const double phx = dphi_dx1(x.x1, t, prm);
    const double c = kPi * kPi * prm.A() * std::cos(kPi * ph) * phx;
    const double ddx1 = -c * std::cos(kPi * x.x2);
    const double ddx2 = c * std::cos(kPi * x.x2);
    return ddx1 + ddx2;
}

/// x2-coordinate of the eps=0 heteroclinic, (2/pi) acot(exp(pi^2 A p)).
/// Evaluated through atan of a decaying exponential so large |p| neither
/// overflows nor loses the approach to the limits 0 and 1.
inline double heteroclinic_x2(double p, const FlowParams& prm) {
    const double a = prm.rate();
    if (p >= 0.0) return (2.0 / kPi) * std::atan(std::exp(-a * p));
    return 1.0 - (2.0 / kPi) * std::atan(std::exp(a * p));
}

/// The exact eps=0 heteroclinic joining (1,1) to (1,0).
inline PhasePoint unperturbed_heteroclinic(double p, const FlowParams& prm) {
    return {1.0, heteroclinic_x2(p, prm)};
}

}  // namespace dg
