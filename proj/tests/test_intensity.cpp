#include <doctest.h>

#include <cmath>

#include "phe/intensity.hpp"
#include "phe/rng.hpp"

using namespace phe;

TEST_CASE("adaptive simpson on smooth and kinked integrands") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0, 1, 1e-12) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(adaptive_simpson([](double x) { return std::sqrt(x); }, 0, 1, 1e-10) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("piecewise constant integrals are exact") {
    const auto s = Intensity::piecewise_constant({0.0, 0.5, 1.0}, {2.0, 0.0});
    CHECK(s.mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.integral(0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.sqrt_integral(0.0, 0.5) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(s.value(0.25) == 2.0);
    CHECK(s.value(0.75) == 0.0);
}

TEST_CASE("piecewise constant inverse cdf is exact") {
    const auto s = Intensity::piecewise_constant({0.0, 0.5, 1.0}, {2.0, 0.0});
    CHECK(s.inverse_cdf(0.0) == 0.0);
    CHECK(s.inverse_cdf(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.inverse_cdf(1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sqrt-affine-power integrals match quadrature") {
    const auto s = Intensity::sqrt_affine_power(0.4, 0.9, 0.7);
    const double direct = adaptive_simpson([&](double x) { return s.value(x); }, 0, 1, 1e-12);
    CHECK(s.mass() == doctest::Approx(direct).epsilon(1e-9));
    const double sq = adaptive_simpson([&](double x) { return std::sqrt(s.value(x)); }, 0, 1, 1e-12);
    CHECK(s.sqrt_integral(0, 1) == doctest::Approx(sq).epsilon(1e-9));
}

TEST_CASE("numeric inverse cdf meets its tolerance") {
    const auto s = Intensity::sqrt_affine_power(0.5, 1.0, 1.0).normalized();
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform();
        const double x = s.inverse_cdf(u * s.mass());
        CHECK(std::abs(s.cdf(x) - u * s.mass()) < 1e-10);
    }
}

TEST_CASE("piecewise polynomial integrals") {
    // s(x) = 3x^2 on [0,1)
    const auto s = Intensity::piecewise_polynomial({0.0, 1.0}, {{0.0, 0.0, 3.0}});
    CHECK(s.mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.integral(0.0, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
    // ∫ sqrt(3) x dx = sqrt(3)/2
    CHECK(s.sqrt_integral(0.0, 1.0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("normalization rescales to unit mass") {
    const auto s = Intensity::piecewise_constant({0.0, 0.25, 1.0}, {4.0, 2.0}).normalized();
    CHECK(s.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negative intensities are rejected") {
    CHECK_THROWS_AS(Intensity::constant(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Intensity::piecewise_constant({0.0, 1.0}, {-0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Intensity::sqrt_affine_power(0.2, -0.5, 1.0), std::invalid_argument);
}

TEST_CASE("cube intensity: constant case integrates exactly") {
    const CubeIntensity s(2, 0.7, {});
    CHECK(s.mass() == doctest::Approx(0.49).epsilon(1e-15));
    const CubeCell cell{DyadicCube(1, {0, 0}), {}};
    CHECK(s.integral(cell) == doctest::Approx(0.49 * 0.25));
    CHECK(s.sqrt_integral(cell) == doctest::Approx(0.7 * 0.25));
}

TEST_CASE("cube intensity bump integrals match 2-d quadrature") {
    const DyadicCube patch(1, {1, 0});
    const CubeIntensity s(2, 0.5, {CubeIntensity::Spike{patch, 2.0, 1.0}});

    // brute force on a fine grid over the whole square
    const int g = 400;
    double sum = 0.0, sum_sqrt = 0.0;
    std::vector<double> x(2);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            x[0] = (i + 0.5) / g;
            x[1] = (j + 0.5) / g;
            const double v = s.value(x);
            sum += v;
            sum_sqrt += std::sqrt(v);
        }
    sum /= g * g;
    sum_sqrt /= g * g;

    const CubeCell whole{DyadicCube::root(2), {}};
    CHECK(s.integral(whole) == doctest::Approx(sum).epsilon(5e-4));
    CHECK(s.sqrt_integral(whole) == doctest::Approx(sum_sqrt).epsilon(5e-4));

    // and on a cell with a hole
    CubeCell cut{DyadicCube::root(2), {patch}};
    REQUIRE(canonicalize_cell(cut));
    CHECK(s.integral(cut) == doctest::Approx(s.integral(whole) - s.integral(CubeCell{patch, {}}))
                                 .epsilon(1e-12));
}
