#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dg/integrate.hpp"
#include "dg/manifold.hpp"
#include "dg/polyline.hpp"

using namespace dg;

TEST_CASE("advect round trip returns to the start") {
    FlowParams prm(1.0, 0.1, 40.0);
    const PhasePoint x0{0.7, 0.4};
    const PhasePoint fwd = advect(x0, 0.0, 3.0 * prm.period(), prm);
    const PhasePoint back = advect(fwd, 3.0 * prm.period(), 0.0, prm);
    CHECK(back.x1 == Catch::Approx(x0.x1).margin(1e-8));
    CHECK(back.x2 == Catch::Approx(x0.x2).margin(1e-8));
}

TEST_CASE("adaptive and fixed-step schemes agree") {
    FlowParams prm(1.0, 0.1, 40.0);
    IntegratorSettings fixed;
    fixed.scheme = Scheme::RK4Fixed;
    fixed.max_step = prm.period() / 200.0;
    const PhasePoint x0{1.2, 0.3};
    const PhasePoint a = advect(x0, 0.0, prm.period(), prm);
    const PhasePoint b = advect(x0, 0.0, prm.period(), prm, fixed);
    CHECK(a.x1 == Catch::Approx(b.x1).margin(1e-8));
    CHECK(a.x2 == Catch::Approx(b.x2).margin(1e-8));
}

TEST_CASE("advect with zero span is the identity") {
    FlowParams prm(1.0, 0.1, 40.0);
    const PhasePoint x0{0.3, 0.6};
    const PhasePoint x1 = advect(x0, 0.5, 0.5, prm);
    CHECK(x1.x1 == x0.x1);
    CHECK(x1.x2 == x0.x2);
}

TEST_CASE("dense output is time-ordered and spans the interval") {
    FlowParams prm(1.0, 0.1, 40.0);
    Trajectory traj;
    advect({0.9, 0.5}, 0.0, prm.period(), prm, {}, &traj);
    REQUIRE(traj.times.size() == traj.points.size());
    REQUIRE(traj.times.size() >= 21);  // max_step = period/20 forces >= 20 steps
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == Catch::Approx(prm.period()).margin(1e-12));
    for (std::size_t i = 1; i < traj.times.size(); ++i)
        CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("boundary of Omega is invariant under advection") {
    FlowParams prm(1.0, 0.3, 40.0);
    for (double x1 : {0.3, 1.0, 1.6}) {
        CHECK(std::abs(advect({x1, 0.0}, 0.0, prm.period(), prm).x2) < 1e-10);
        CHECK(std::abs(advect({x1, 1.0}, 0.0, prm.period(), prm).x2 - 1.0) < 1e-10);
    }
    for (double x2 : {0.2, 0.5, 0.8}) {
        CHECK(std::abs(advect({0.0, x2}, 0.0, prm.period(), prm).x1) < 1e-10);
        CHECK(std::abs(advect({2.0, x2}, 0.0, prm.period(), prm).x1 - 2.0) < 1e-10);
    }
}

TEST_CASE("poincare_map iterates and inverts") {
    FlowParams prm(1.0, 0.1, 40.0);
    const PhasePoint x0{0.8, 0.45};
    const PhasePoint p2 = poincare_map(x0, 0.0, 2, prm);
    const PhasePoint p11 = poincare_map(poincare_map(x0, 0.0, 1, prm), 0.0, 1, prm);
    CHECK(p2.x1 == Catch::Approx(p11.x1).margin(1e-9));
    CHECK(p2.x2 == Catch::Approx(p11.x2).margin(1e-9));
    const PhasePoint back = poincare_map(p2, 0.0, -2, prm);
    CHECK(back.x1 == Catch::Approx(x0.x1).margin(1e-8));
    CHECK(back.x2 == Catch::Approx(x0.x2).margin(1e-8));
}

TEST_CASE("hyperbolic fixed points sit on the invariant lines near x1=1") {
    FlowParams prm(1.0, 0.1, 40.0);
    const PhasePoint lower = find_hyperbolic_fixed_point({1.0, 0.0}, 0.0, prm, {},
                                                         FixedPointConstraint::OnX2Zero);
    CHECK(lower.x2 == 0.0);
    CHECK(lower.x1 == Catch::Approx(1.0).margin(0.05));
    const PhasePoint res = poincare_map(lower, 0.0, 1, prm);
    CHECK(res.x1 == Catch::Approx(lower.x1).margin(1e-10));

    const PhasePoint upper = find_hyperbolic_fixed_point({1.0, 1.0}, 0.0, prm, {},
                                                         FixedPointConstraint::OnX2One);
    CHECK(upper.x2 == 1.0);
    CHECK(upper.x1 == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("fixed point matches the O(eps) hyperbolic trajectory within 5 eps^2") {
    FlowParams prm(1.0, 0.1, 40.0);
    const double tol = 5.0 * prm.eps() * prm.eps();
    const PhasePoint lower = find_hyperbolic_fixed_point({1.0, 0.0}, 0.0, prm, {},
                                                         FixedPointConstraint::OnX2Zero);
    const PhasePoint eq3 = hyperbolic_trajectory(ManifoldBranch::Stable, 0.0, prm);
    CHECK(std::abs(lower.x1 - eq3.x1) < tol);
    const PhasePoint upper = find_hyperbolic_fixed_point({1.0, 1.0}, 0.0, prm, {},
                                                         FixedPointConstraint::OnX2One);
    const PhasePoint eq6 = hyperbolic_trajectory(ManifoldBranch::Unstable, 0.0, prm);
    CHECK(std::abs(upper.x1 - eq6.x1) < tol);
}

TEST_CASE("poincare_jacobian has unit determinant (area preservation)") {
    FlowParams prm(1.0, 0.1, 40.0);
    const Mat2 j = poincare_jacobian({0.9, 0.4}, 0.0, prm);
    CHECK(j.a11 * j.a22 - j.a12 * j.a21 == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("dominant_eigenvector solves the 2x2 eigenproblem") {
    const Mat2 m{3.0, 1.0, 1.0, 2.0};
    double lambda = 0.0;
    const Vec2 v = dominant_eigenvector(m, &lambda);
    CHECK(lambda == Catch::Approx(2.5 + std::sqrt(1.25)));
    CHECK(m.a11 * v.x + m.a12 * v.y == Catch::Approx(lambda * v.x).margin(1e-12));
    CHECK(m.a21 * v.x + m.a22 * v.y == Catch::Approx(lambda * v.y).margin(1e-12));
    CHECK(std::hypot(v.x, v.y) == Catch::Approx(1.0));
}

TEST_CASE("advected polygon preserves its area over 5 periods") {
    FlowParams prm(1.0, 0.1, 40.0);
    PolylineCurve square;
    square.vertices = {{0.8, 0.3}, {1.2, 0.3}, {1.2, 0.7}, {0.8, 0.7}, {0.8, 0.3}};
    square.recompute_arclengths();
    RefinementPolicy refine;
    refine.max_gap = 2e-3;
    const PolylineCurve image =
        advect_polyline(square, 0.0, 5.0 * prm.period(), prm, {}, refine);
    const double a0 = 0.16;
    const double a5 = std::abs(polygon_area(image.vertices));
    CHECK(std::abs(a5 - a0) / a0 < 1e-5);
}
