#include <cmath>

#include "doctest.h"
#include "syntro/numerics.hpp"

using namespace syntro;

TEST_CASE("triangular matrices return their diagonal exactly") {
    const Mat2 lower{0.7, 0.0, 3.25, 0.1};
    const auto ev = eigenvalues(lower);
    CHECK(ev[0].real() == 0.7);
    CHECK(ev[1].real() == 0.1);
    CHECK(ev[0].imag() == 0.0);

    const Mat2 upper{-1.0 / 3.0, 5.0, 0.0, 2.0 / 7.0};
    const auto ev2 = eigenvalues(upper);
    CHECK(ev2[0].real() == -1.0 / 3.0);
    CHECK(ev2[1].real() == 2.0 / 7.0);
}

TEST_CASE("general real and complex eigenvalue pairs") {
    // det < 0: one negative, one positive, ordered ascending by real part.
    const Mat2 saddle{1.0, 2.0, 3.0, -1.0};  // eigenvalues -sqrt(7), sqrt(7)
    const auto ev = eigenvalues(saddle);
    CHECK(ev[0].real() == doctest::Approx(-std::sqrt(7.0)).epsilon(1e-14));
    CHECK(ev[1].real() == doctest::Approx(std::sqrt(7.0)).epsilon(1e-14));

    const Mat2 rotation{0.0, 1.0, -1.0, 0.0};  // eigenvalues +-i
    const auto ev2 = eigenvalues(rotation);
    CHECK(ev2[0].real() == 0.0);
    CHECK(std::abs(ev2[0].imag()) == doctest::Approx(1.0));
    CHECK(ev2[0].imag() == -ev2[1].imag());
}

TEST_CASE("eigenvectors satisfy the defining equation") {
    const Mat2 m{2.0, 1.0, 1.0, 2.0};  // eigenvalues 1 and 3
    for (double lambda : {1.0, 3.0}) {
        const auto v = eigenvector(m, lambda);
        const double rx = m.a11 * v[0] + m.a12 * v[1] - lambda * v[0];
        const double ry = m.a21 * v[0] + m.a22 * v[1] - lambda * v[1];
        CHECK(std::abs(rx) < 1e-14);
        CHECK(std::abs(ry) < 1e-14);
        CHECK(std::hypot(v[0], v[1]) == doctest::Approx(1.0).epsilon(1e-14));
    }
    // A multiple of the identity has no preferred direction.
    const auto fallback = eigenvector(Mat2{2.0, 0.0, 0.0, 2.0}, 2.0);
    CHECK(std::hypot(fallback[0], fallback[1]) == doctest::Approx(1.0));
}

TEST_CASE("interval intersection") {
    CHECK(intersect({0.0, 2.0}, {1.0, 3.0}).lo == 1.0);
    CHECK(intersect({0.0, 2.0}, {1.0, 3.0}).hi == 2.0);
    CHECK(intersect({0.0, 1.0}, {2.0, 3.0}).empty());
    CHECK(intersect({0.0, 1.0}, Interval{}).empty());
    CHECK(Interval{1.0, 1.0}.length() == 0.0);
    CHECK(Interval{0.0, 2.0}.contains(2.0));
    CHECK_FALSE(Interval{0.0, 2.0}.contains(2.0 + 1e-12));
}

TEST_CASE("monotone solves bracket in either direction") {
    auto rising = [](double x) { return x * x * x; };
    auto falling = [](double x) { return 1.0 - x; };
    auto root = detail::solve_monotone(rising, 0.0, 2.0, 0.125);
    REQUIRE(root.has_value());
    CHECK(*root == doctest::Approx(0.5).epsilon(1e-10));
    root = detail::solve_monotone(falling, 0.0, 2.0, 0.25);
    REQUIRE(root.has_value());
    CHECK(*root == doctest::Approx(0.75).epsilon(1e-10));
    CHECK_FALSE(detail::solve_monotone(rising, 0.0, 2.0, 9.0).has_value());
    // Exact hits at the endpoints short-circuit.
    CHECK(*detail::solve_monotone(rising, 0.0, 2.0, 0.0) == 0.0);
    CHECK(*detail::solve_monotone(rising, 0.0, 2.0, 8.0) == 2.0);
}
