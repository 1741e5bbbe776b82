#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dg/quadrature.hpp"
#include "dg/special.hpp"

using namespace dg;

TEST_CASE("integrate reproduces elementary antiderivatives") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          Catch::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846) ==
          Catch::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
          Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate handles oscillatory integrands adaptively") {
    // int_0^1 sin(40 x) dx = (1 - cos 40)/40.
    const double exact = (1.0 - std::cos(40.0)) / 40.0;
    CHECK(integrate([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0) ==
          Catch::Approx(exact).margin(1e-12));
}

TEST_CASE("integrate is signed and additive") {
    auto f = [](double x) { return std::cos(x); };
    const double ab = integrate(f, 0.0, 2.0);
    const double ba = integrate(f, 2.0, 0.0);
    CHECK(ab == Catch::Approx(-ba).margin(1e-13));
    CHECK(integrate(f, 0.0, 1.0) + integrate(f, 1.0, 2.0) ==
          Catch::Approx(ab).margin(1e-12));
}

TEST_CASE("special functions are overflow-free") {
    CHECK(log_cosh(0.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(log_cosh(800.0) == Catch::Approx(800.0 - std::log(2.0)).epsilon(1e-14));
    CHECK(log_cosh(-5.0) == Catch::Approx(std::log(std::cosh(5.0))).epsilon(1e-14));
    CHECK(cosh_ratio(700.0, 699.0) == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(sech(0.0) == 1.0);
    // sinh(x-y)/cosh(y)^2 without cancellation.
    const double x = 3.0, y = 3.0 + 1e-9;
    const double exact = std::sinh(x - y) / (std::cosh(y) * std::cosh(y));
    CHECK(tanh_gap_core(x, y) == Catch::Approx(exact).epsilon(1e-6));
    CHECK(tanh_gap_core(2.0, 2.0) == 0.0);
}
