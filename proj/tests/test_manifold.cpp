#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dg/manifold.hpp"

using namespace dg;

TEST_CASE("eps=0 manifolds collapse to the heteroclinic segment") {
    FlowParams prm(1.0, 0.0, 40.0);
    for (double p : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
        const ManifoldSample s = stable_manifold_sample(p, 0.0, prm);
        CHECK(s.position.x1 == Catch::Approx(1.0).margin(1e-12));
        CHECK(s.position.x2 == Catch::Approx(heteroclinic_x2(p, prm)).margin(1e-14));
        CHECK(std::abs(s.d1.x) < 1e-12);
        const ManifoldSample u = unstable_manifold_sample(p, 0.0, prm);
        CHECK(u.position.x1 == Catch::Approx(1.0).margin(1e-12));
    }
    const PhasePoint a = hyperbolic_trajectory(ManifoldBranch::Stable, 0.3, prm);
    CHECK(a.x1 == 1.0);
    CHECK(a.x2 == 0.0);
}

TEST_CASE("anchors approach the saddles as p -> +-inf") {
    FlowParams prm(1.0, 0.1, 40.0);
    // Stable branch: x2 -> 0 (lower saddle) as p -> +inf.
    CHECK(stable_manifold_sample(3.0, 0.0, prm).position.x2 < 1e-10);
    // Unstable branch: x2 -> 1 (upper saddle) as p -> -inf.
    CHECK(unstable_manifold_sample(-3.0, 0.0, prm).position.x2 > 1.0 - 1e-10);
}

TEST_CASE("x1 offset is O(eps)") {
    const double p = 0.2, t = 0.05;
    double prev = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        FlowParams prm(1.0, eps, 40.0);
        const double off = std::abs(stable_manifold_sample(p, t, prm).position.x1 - 1.0);
        if (prev > 0.0) CHECK(off == Catch::Approx(prev / 2.0).epsilon(1e-6));
        prev = off;
    }
}

TEST_CASE("dx1_dp envelope form agrees with the direct integral") {
    FlowParams prm(1.0, 0.1, 40.0);
    for (double p : {-0.8, -0.2, 0.0, 0.3, 1.0}) {
        for (double t : {0.0, 0.07}) {
            CHECK(dx1_dp(p, t, prm) ==
                  Catch::Approx(dx1_dp_direct(p, t, prm)).margin(1e-9));
        }
    }
}

TEST_CASE("dx1_dp is the p-derivative of the position") {
    FlowParams prm(1.0, 0.1, 40.0);
    const double p = -0.3, t = 0.0, h = 1e-5;
    const double fd = (stable_manifold_sample(p + h, t, prm).position.x1 -
                       stable_manifold_sample(p - h, t, prm).position.x1) /
                      (2.0 * h);
    CHECK(dx1_dp(p, t, prm) == Catch::Approx(fd).margin(1e-6));
}

TEST_CASE("d2x1_dp2 is the p-derivative of dx1_dp") {
    FlowParams prm(1.0, 0.1, 40.0);
    const double p = -0.3, t = 0.0, h = 1e-5;
    const double fd = (dx1_dp(p + h, t, prm) - dx1_dp(p - h, t, prm)) / (2.0 * h);
    CHECK(d2x1_dp2(p, t, prm) == Catch::Approx(fd).epsilon(1e-4));
}

TEST_CASE("x2_derivatives match finite differences of heteroclinic_x2") {
    FlowParams prm(1.0, 0.1, 40.0);
    const double p = 0.15, h = 1e-6;
    const auto [d1, d2] = x2_derivatives(p, prm);
    const double fd1 = (heteroclinic_x2(p + h, prm) - heteroclinic_x2(p - h, prm)) / (2 * h);
    const double fd2 = (heteroclinic_x2(p + h, prm) - 2.0 * heteroclinic_x2(p, prm) +
                        heteroclinic_x2(p - h, prm)) /
                       (h * h);
    CHECK(d1 == Catch::Approx(fd1).epsilon(1e-8));
    CHECK(d2 == Catch::Approx(fd2).epsilon(1e-3));
}

TEST_CASE("recast and direct offsets agree") {
    FlowParams prm(1.0, 0.1, 40.0);
    for (double p : {-0.5, 0.0, 0.5}) {
        const PhasePoint a = manifold_point(ManifoldBranch::Stable, p, 0.04, prm);
        const PhasePoint b = manifold_point_recast(ManifoldBranch::Stable, p, 0.04, prm);
        CHECK(a.x1 == Catch::Approx(b.x1).margin(1e-9));
        CHECK(a.x2 == Catch::Approx(b.x2).margin(1e-14));
    }
}

TEST_CASE("stable/unstable branches are (p,t) -> (-p,-t) images") {
    FlowParams prm(1.0, 0.1, 40.0);
    const double p = 0.3, t = 0.05;
    const ManifoldSample s = stable_manifold_sample(p, t, prm);
    const ManifoldSample u = unstable_manifold_sample(-p, -t, prm);
    CHECK(u.position.x1 - 1.0 == Catch::Approx(-(s.position.x1 - 1.0)).margin(1e-12));
    CHECK(u.position.x2 == Catch::Approx(1.0 - s.position.x2).margin(1e-12));
}

TEST_CASE("trusted window flags") {
    FlowParams prm(1.0, 0.1, 40.0);
    CHECK(stable_manifold_sample(0.0, 0.0, prm).trusted);
    CHECK_FALSE(stable_manifold_sample(kTrustedPMin - 0.2, 0.0, prm).trusted);
    CHECK(unstable_manifold_sample(0.0, 0.0, prm).trusted);
    CHECK_FALSE(unstable_manifold_sample(kTrustedPMax + 0.2, 0.0, prm).trusted);
}

TEST_CASE("sample dispatch matches branch helpers") {
    FlowParams prm(1.0, 0.1, 40.0);
    const ManifoldSample a = manifold_sample(ManifoldBranch::Unstable, -0.2, 0.03, prm);
    const ManifoldSample b = unstable_manifold_sample(-0.2, 0.03, prm);
    CHECK(a.position.x1 == b.position.x1);
    CHECK(a.d1.x == b.d1.x);
}

TEST_CASE("envelope modulus bounds the oscillation of dx1_dp") {
    FlowParams prm(1.0, 0.1, 40.0);
    const double p = -0.4;
    const EnvelopeData e = envelope(p, prm);
    CHECK(e.J > 0.0);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double t = prm.period() * i / 32.0;
        worst = std::max(worst, std::abs(dx1_dp(p, t, prm)));
    }
    CHECK(worst <= e.J * (1.0 + 1e-9));
    CHECK(worst > 0.9 * e.J);  // the bound is attained over a full period
}
