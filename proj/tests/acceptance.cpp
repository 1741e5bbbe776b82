// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Each check pins its own tolerances and runtime cap.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "dg/dg.hpp"

using namespace dg;

namespace {

int g_failures = 0;

void run(const std::string& label, double cap_seconds, const std::function<bool()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        note = std::string(" (") + e.what() + ")";
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && cap_seconds > 0.0 && dt > cap_seconds) {
        ok = false;
        note = " (over runtime cap)";
    }
    if (!ok) ++g_failures;
    std::printf("%s %-28s [%6.1f s]%s\n", ok ? "PASS" : "FAIL", label.c_str(), dt,
                note.c_str());
    std::fflush(stdout);
}

bool melnikov_closed_form() {
    const struct {
        double A, omega;
    } cases[] = {{1.0, 40.0}, {0.5, 10.0}, {2.0, 5.0}};
    double worst = 0.0;
    for (const auto& c : cases) {
        FlowParams prm(c.A, 0.1, c.omega);
        for (int i = 0; i <= 40; ++i) {
            const double p = -2.0 + 4.0 * i / 40.0;
            for (int j = 0; j < 4; ++j) {
                const double t = prm.period() * j / 4.0;
                const double q = melnikov_full(p, t, prm, MelnikovMethod::Quadrature).value;
                const double cf = melnikov_closed(p, t, prm).value;
                worst = std::max(worst, std::abs(q - cf));
            }
        }
    }
    std::printf("  max |quadrature - closed| = %.3e\n", worst);
    return worst < 1e-8;
}

std::vector<FoldPoint> g_folds;

bool fold_locations() {
    FlowParams prm(1.0, 0.1, 40.0);
    g_folds = find_fold_points(-1.2, 0.0, 0.0, prm, 10);
    if (g_folds.size() != 10) return false;
    std::printf("  first fold p = %.5f, tenth p = %.5f\n", g_folds.front().p,
                g_folds.back().p);
    return std::abs(g_folds.front().p - (-0.2417)) < 1e-3 &&
           std::abs(g_folds.back().p - (-0.9485)) < 1e-3;
}

bool fold_spacing() {
    if (g_folds.size() != 10) return false;
    const SpacingRegression reg = fold_spacing_regression(g_folds);
    std::printf("  slope = %.4f, r^2 = %.5f\n", reg.slope, reg.r2);
    return std::abs(reg.slope - 0.7663) < 0.05 && reg.r2 > 0.99;
}

bool expansion_order() {
    const double eps_set[] = {0.05, 0.1, 0.2};
    std::vector<double> le, ld;
    for (double eps : eps_set) {
        FlowParams prm(1.0, eps, 40.0);
        const PolylineCurve numeric = grow_stable_manifold(0.0, 0.9, prm);
        PolylineCurve analytic;
        analytic.t = 0.0;
        for (int i = 0; i <= 800; ++i) {
            const double p = 0.2 - 0.4 * i / 800.0;
            analytic.vertices.push_back(manifold_point(ManifoldBranch::Stable, p, 0.0, prm));
        }
        analytic.recompute_arclengths();
        const double d = curve_distance(analytic, numeric, 0.2, 0.8);
        std::printf("  eps = %.2f: distance = %.3e\n", eps, d);
        le.push_back(std::log(eps));
        ld.push_back(std::log(d));
    }
    // Least-squares slope of log d vs log eps.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(le.size());
    for (std::size_t i = 0; i < le.size(); ++i) {
        sx += le[i];
        sy += ld[i];
        sxx += le[i] * le[i];
        sxy += le[i] * ld[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::printf("  log-log slope = %.3f (accuracy floor: >= 1.8)\n", slope);
    // The O(eps) expansion must converge at least quadratically.  For this
    // flow the measured order is ~3: the eps^2 coefficient of the remainder
    // vanishes identically (checked over eps in [0.0125, 0.2] at several
    // phases), so the curves are one order better than required.
    return slope >= 1.8;
}

bool hyperbolic_trajectory_check() {
    FlowParams prm(1.0, 0.1, 40.0);
    const double tol = 5.0 * prm.eps() * prm.eps();
    const PhasePoint lower = find_hyperbolic_fixed_point({1.0, 0.0}, 0.0, prm, {},
                                                         FixedPointConstraint::OnX2Zero);
    const PhasePoint eq3 = hyperbolic_trajectory(ManifoldBranch::Stable, 0.0, prm);
    const PhasePoint upper = find_hyperbolic_fixed_point({1.0, 1.0}, 0.0, prm, {},
                                                         FixedPointConstraint::OnX2One);
    const PhasePoint eq6 = hyperbolic_trajectory(ManifoldBranch::Unstable, 0.0, prm);
    std::printf("  |x2=0 gap| = %.2e, |x2=1 gap| = %.2e (tol %.2e)\n",
                std::abs(lower.x1 - eq3.x1), std::abs(upper.x1 - eq6.x1), tol);
    return std::abs(lower.x1 - eq3.x1) < tol && std::abs(upper.x1 - eq6.x1) < tol;
}

bool conservation_suite() {
    FlowParams prm(1.0, 0.3, 40.0);
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 10; ++j) {
            if (std::abs(divergence({0.1 * i, 0.1 * j}, 0.037, prm)) >= 1e-12) return false;
        }
    }
    for (double x1 : {0.3, 1.0, 1.6}) {
        if (std::abs(advect({x1, 0.0}, 0.0, prm.period(), prm).x2) >= 1e-10) return false;
        if (std::abs(advect({x1, 1.0}, 0.0, prm.period(), prm).x2 - 1.0) >= 1e-10)
            return false;
    }
    for (double x2 : {0.2, 0.5, 0.8}) {
        if (std::abs(advect({0.0, x2}, 0.0, prm.period(), prm).x1) >= 1e-10) return false;
        if (std::abs(advect({2.0, x2}, 0.0, prm.period(), prm).x1 - 2.0) >= 1e-10)
            return false;
    }
    FlowParams mild(1.0, 0.1, 40.0);
    PolylineCurve square;
    square.vertices = {{0.8, 0.3}, {1.2, 0.3}, {1.2, 0.7}, {0.8, 0.7}, {0.8, 0.3}};
    square.recompute_arclengths();
    RefinementPolicy refine;
    refine.max_gap = 2e-3;
    const PolylineCurve image =
        advect_polyline(square, 0.0, 5.0 * mild.period(), mild, {}, refine);
    const double rel = std::abs(std::abs(polygon_area(image.vertices)) - 0.16) / 0.16;
    std::printf("  5-period area drift = %.2e relative\n", rel);
    return rel < 1e-5;
}

bool transverse_intersections() {
    FlowParams prm(1.0, 0.1, 40.0);
    const PolylineCurve stable = grow_stable_manifold(0.0, 0.9, prm);
    // Grow the unstable branch one period at a time until it descends past
    // the window, stopping before it can wrap around the gyre boundary.
    PolylineCurve unstable = grow_unstable_manifold(0.0, 0.8, prm);
    for (int it = 0; it < 8; ++it) {
        double min_x2 = 1.0;
        for (const PhasePoint& v : unstable.vertices) min_x2 = std::min(min_x2, v.x2);
        if (min_x2 < 0.045) break;
        unstable = advect_polyline(unstable, 0.0, prm.period(), prm);
        unstable.t = 0.0;
    }
    const auto roots = curve_crossings(stable, unstable, 0.05, 0.5);
    std::printf("  %zu crossings over x2 in (0.05, 0.5)\n", roots.size());
    if (roots.size() < 3) return false;
    for (double x2 : roots) {
        const double p = parameter_from_x2(x2, prm);
        // Nearest point of the t - m pi/omega grid.
        const double q = p * prm.omega() / kPi;
        const double gap = std::abs(q - std::round(q)) * kPi / prm.omega();
        std::printf("    crossing at x2 = %.4f (p = %.4f, grid gap %.4f)\n", x2, p, gap);
        if (gap > 0.05) return false;
    }
    return true;
}

bool horseshoe_strips() {
    FlowParams prm(1.0, 0.1, 40.0);
    const double t = 0.25 * prm.period();
    const RegionA A = build_region_A(t, 0.05, prm);
    const RefinementPolicy refine = horseshoe_refinement(A);
    const HorseshoeSweep sweep = horseshoe_sweep(A, 12, prm, {}, refine);
    for (const auto& r : sweep.rows)
        std::printf("  n = %2d: strips = %d (%zu vertices)\n", r.n, r.strips, r.vertices);
    if (sweep.first_n_with_two < 0 || sweep.first_n_with_two > 12) return false;
    const int n2 = sweep.first_n_with_two;
    const int base = sweep.rows[static_cast<std::size_t>(n2) - 1].strips;
    RefinementPolicy doubled = horseshoe_refinement(A, 2e-4, 150.0, 4'000'000);
    const StripCountResult audit = strip_count(A, n2, prm, {}, doubled);
    std::printf("  budget-doubling audit at n = %d: strips = %d (was %d)\n", n2,
                audit.strips, base);
    return audit.strips >= base;
}

bool tangential_identity() {
    FlowParams prm(1.0, 0.1, 40.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double p = -1.0 + 0.5 * i;
            const double t = prm.period() * j / 5.0;
            worst = std::max(worst, std::abs(tangential_term_Bs(p, t, prm)));
        }
    }
    std::printf("  max |B^s| = %.3e\n", worst);
    return worst < 1e-10;
}

}  // namespace

int main() {
    run("melnikov-closed-form", 10.0, melnikov_closed_form);
    run("fold-locations", 30.0, fold_locations);
    run("fold-spacing-regression", 60.0, fold_spacing);
    run("expansion-order-eps2", 300.0, expansion_order);
    run("hyperbolic-trajectory", 0.0, hyperbolic_trajectory_check);
    run("conservation-invariance", 0.0, conservation_suite);
    run("transverse-intersections", 0.0, transverse_intersections);
    run("horseshoe-strips", 900.0, horseshoe_strips);
    run("tangential-term-identity", 0.0, tangential_identity);
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
