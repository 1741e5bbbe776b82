#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <vector>

#include "dg/errors.hpp"

namespace dg {

namespace detail {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1],
/// computed once by Newton iteration on the Legendre recurrence.
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> node{};
    std::array<double, N> weight{};

    GaussLegendre() {
        const std::size_t m = (N + 1) / 2;
        for (std::size_t i = 0; i < m; ++i) {
            // Chebyshev-like initial guess for the i-th root.
            double x = std::cos(3.14159265358979323846 * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(N) + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (std::size_t j = 0; j < N; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * static_cast<double>(j) + 1.0) * x * p1 -
                          static_cast<double>(j) * p2) /
                         (static_cast<double>(j) + 1.0);
                }
                pp = static_cast<double>(N) * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = -x;
            node[N - 1 - i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
            weight[N - 1 - i] = weight[i];
        }
    }
};

inline const GaussLegendre<15>& gl15() {
    static const GaussLegendre<15> rule;
    return rule;
}

template <std::invocable<double> F>
double gl15_panel(F&& f, double a, double b) {
    const auto& r = gl15();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < 15; ++i) sum += r.weight[i] * f(c + h * r.node[i]);
    return h * sum;
}

template <std::invocable<double> F>
double adapt(F&& f, double a, double b, double tol, double whole, int depth) {
    if (depth > 30)
        throw QuadratureNonConvergence("adaptive quadrature: depth limit exceeded");
    const double m = 0.5 * (a + b);
    const double left = gl15_panel(f, a, m);
    const double right = gl15_panel(f, m, b);
    const double sum = left + right;
    // Floor the acceptance threshold at the rounding level of the panel
    // sums, else deep bisection chases noise.  The constant allows for the
    // integrand's own evaluation noise (node placement rounds at ~1e-16
    // relative, amplified by the integrand's local derivative), which can
    // exceed 1e-14 of the panel value.
    const double floor = 5e-14 * (std::abs(left) + std::abs(right));
    if (std::abs(sum - whole) <= std::max(tol, floor)) return sum;
    return adapt(f, a, m, 0.5 * tol, left, depth + 1) +
           adapt(f, m, b, 0.5 * tol, right, depth + 1);
}

}  // namespace detail

/// Adaptive panel quadrature of f over [a,b].  The interval is first cut
/// into panels no wider than max_panel (so every half-period of an
/// oscillatory integrand gets its own panel), then each panel is bisected
/// until the Gauss-Legendre estimates stabilize to its share of tol.
template <std::invocable<double> F>
double integrate(F&& f, double a, double b, double tol = 1e-12,
                 double max_panel = 1e300) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double len = b - a;
    const int npanel = std::max(1, static_cast<int>(std::ceil(len / max_panel)));
    const double w = len / npanel;
    std::vector<double> est(npanel);
    double scale = 0.0;
    for (int i = 0; i < npanel; ++i) {
        const double pa = a + i * w;
        const double pb = (i + 1 == npanel) ? b : pa + w;
        est[i] = detail::gl15_panel(f, pa, pb);
        scale += std::abs(est[i]);
    }
    // Large-magnitude integrands carry rounding noise ~1e-16 * scale in the
    // total regardless of panel refinement, so an absolute tolerance below
    // that is unattainable; floor each panel's share accordingly.
    const double ptol = std::max(tol, 5e-14 * scale) / npanel;
    double total = 0.0;
    for (int i = 0; i < npanel; ++i) {
        const double pa = a + i * w;
        const double pb = (i + 1 == npanel) ? b : pa + w;
        total += detail::adapt(f, pa, pb, ptol, est[i], 0);
    }
    return sign * total;
}

}  // namespace dg
