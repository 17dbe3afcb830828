#include <doctest.h>

#include <cmath>
#include <complex>

#include "resokit/quad.hpp"
#include "resokit/types.hpp"

using namespace resokit;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
// PV of e^{-mu^2}/(1-mu) over the line equals 2*sqrt(pi)*DawsonF(1);
// value frozen from an independent power-series evaluation of DawsonF
constexpr double kPvGaussAtOne = 1.9074421882417552323;

}  // namespace

TEST_SUITE("quad") {

TEST_CASE("gaussian integrates to sqrt(pi)") {
    auto r = integrate_real_line([](double mu) { return std::exp(-mu * mu); }, 10.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - kSqrtPi) < 1e-12);
    CHECK(r.abs_err_estimate >= 0.0);
}

TEST_CASE("zero integrand gives zero") {
    auto r = integrate_real_line([](double) { return 0.0; }, 10.0);
    CHECK(r.value == 0.0);
}

TEST_CASE("complex-pole integrand matches a refined self-oracle") {
    auto f = [](double mu) { return std::exp(-mu * mu) / (kI - mu); };
    auto base = integrate_real_line(f, 9.0);
    QuadOptions tight;
    tight.rel_tol = 1e-13;
    auto oracle = integrate_interval(f, -18.0, 18.0, tight);
    CHECK(base.converged);
    CHECK(std::abs(base.value - oracle.value) < 1e-10);
}

TEST_CASE("pv of an even function about its pole vanishes") {
    auto r = pv_integrate([](double mu) { return std::exp(-mu * mu); }, 0.0);
    CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("pv with removable singularity") {
    // mu*e^{-mu^2}/(0-mu) = -e^{-mu^2}
    auto r = pv_integrate([](double mu) { return mu * std::exp(-mu * mu); }, 0.0);
    CHECK(std::abs(r.value - (-kSqrtPi)) < 1e-10);
}

TEST_CASE("pv of the gaussian at pole 1 hits the dawson value") {
    auto r = pv_integrate([](double mu) { return std::exp(-mu * mu); }, 1.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - kPvGaussAtOne) < 1e-8);
}

TEST_CASE("pv is linear in the integrand") {
    auto f = [](double mu) { return std::exp(-mu * mu); };
    auto g = [](double mu) { return mu * std::exp(-0.5 * mu * mu); };
    auto combo = [&](double mu) { return 2.0 * f(mu) - 3.0 * g(mu); };
    const double lhs = pv_integrate(combo, 0.7).value;
    const double rhs = 2.0 * pv_integrate(f, 0.7).value - 3.0 * pv_integrate(g, 0.7).value;
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("cauchy integral of 1/z on the unit circle") {
    auto r = contour_circle([](Complex z) { return 1.0 / z; }, Circle{Complex(0, 0), 1.0}, 64,
                            true);
    CHECK(std::abs(r.value - 1.0) < 1e-12);
}

TEST_CASE("contour of a constant over a rectangle vanishes") {
    auto r = contour_rectangle([](Complex) { return Complex(1.0, 0.0); },
                               Rectangle{-1.0, 2.0, -1.5, 0.5});
    CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("double pole with constant numerator has zero residue") {
    auto f = [](Complex z) { return 1.0 / ((z - 0.5) * (z - 0.5)); };
    auto r = contour_circle(f, Circle{Complex(0.5, 0.0), 0.3}, 64, true);
    CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("node doubling stays within the reported estimate") {
    auto f = [](Complex z) { return std::exp(z) / (z - 0.2); };
    const Circle c{Complex(0.2, 0.1), 0.8};
    auto coarse = contour_circle(f, c, 32);
    auto fine = contour_circle(f, c, 64);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.abs_err_estimate + 1e-14);
}

TEST_CASE("tiny node counts are rejected") {
    auto f = [](Complex z) { return z; };
    CHECK_THROWS_AS(contour_circle(f, Circle{Complex(0, 0), 1.0}, 4), std::invalid_argument);
    CHECK_THROWS_AS(contour_rectangle(f, Rectangle{0, 1, 0, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(contour_rectangle(f, Rectangle{1, 0, 0, 1}), std::invalid_argument);
}

TEST_CASE("winding number counts enclosed zeros") {
    const Complex z0(0.3, -0.4);
    auto g = [&](Complex z) { return z - z0; };
    CHECK(winding_number(g, Rectangle{-1, 1, -1, 1}) == 1);
    CHECK(winding_number(g, Rectangle{1, 2, -1, 1}) == 0);
    auto g2 = [&](Complex z) { return (z - z0) * (z - z0); };
    CHECK(winding_number(g2, Rectangle{-1, 1, -1, 1}) == 2);
}

TEST_CASE("winding is additive across a shared edge") {
    const Complex z0(0.25, -0.5);
    auto g = [&](Complex z) { return (z - z0) * (z + 0.7 - 0.1 * kI); };
    const Rectangle whole{-1, 1, -1, 1};
    const Rectangle left{-1, 0, -1, 1};
    const Rectangle right{0, 1, -1, 1};
    CHECK(winding_number(g, whole) ==
          winding_number(g, left) + winding_number(g, right));
}

TEST_CASE("a zero sitting on the contour is rejected") {
    auto g = [](Complex z) { return z - 1.0; };
    CHECK_THROWS_AS(winding_number(g, Rectangle{1.0, 2.0, -0.5, 0.5}), SearchError);
}

TEST_CASE("winding accepts an exact log-derivative") {
    const Complex z0(0.1, 0.2);
    auto g = [&](Complex z) { return (z - z0) * (z - z0) * (z - z0); };
    auto ld = [&](Complex z) { return 3.0 / (z - z0); };
    CHECK(winding_number(g, Rectangle{-1, 1, -1, 1}, ld) == 3);
}

TEST_CASE("interval split handles a narrow feature") {
    // spike of width 1e-3 at 0.5 on top of a broad gaussian
    auto f = [](double x) {
        const double u = (x - 0.5) / 1e-3;
        return std::exp(-x * x) + std::exp(-u * u);
    };
    auto split = integrate_split(f, -8.0, 8.0, {0.45, 0.5, 0.55});
    const double expect = kSqrtPi + 1e-3 * kSqrtPi;  // both bumps fully inside
    CHECK(split.converged);
    CHECK(std::abs(split.value - expect) < 1e-9);
}

TEST_CASE("matrix-valued integrands are supported") {
    auto f = [](double mu) {
        CMatrix m(2, 2);
        m << std::exp(-mu * mu), 0.0, 0.0, mu * std::exp(-mu * mu);
        return m;
    };
    auto r = integrate_real_line(f, 10.0);
    CHECK(std::abs(r.value(0, 0) - kSqrtPi) < 1e-10);
    CHECK(std::abs(r.value(1, 1)) < 1e-12);
}

}  // TEST_SUITE
