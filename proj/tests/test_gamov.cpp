#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "resokit/gamov.hpp"
#include "resokit/livsic.hpp"
#include "resokit/resonance.hpp"

using namespace resokit;
using namespace testkit;

namespace {

struct ScalarFixture {
    ModelSpec m = load_bundled("scalar_gauss.json");
    Resonance res;
    GamovVector gv;

    ScalarFixture() {
        const LocateResult lr = locate_resonances(m, Rectangle{0.0, 2.0, -0.5, -1e-4});
        REQUIRE(lr.found.size() == 1);
        res = lr.found.front();
        gv = gamov_vector(m, res);
    }
};

CVector unit1() {
    CVector e(1);
    e << 1.0;
    return e;
}

}  // namespace

TEST_SUITE("gamov") {

TEST_CASE("the coupling image at a scalar zero is in closed form") {
    ScalarFixture fx;
    const Complex phase = fx.gv.e0(0);  // kernel vector is unit, phase free
    const Complex expect = 0.1 * std::exp(-fx.gv.zeta * fx.gv.zeta / 2.0) * phase;
    CHECK(std::abs(fx.gv.k0(0) - expect) < 1e-10);
    CHECK(std::abs(fx.gv.at(0.0)(0) - fx.gv.k0(0) / fx.gv.zeta) < 1e-14);
}

TEST_CASE("channel support survives in the block-diagonal model") {
    ModelSpec m = load_bundled("two_channel.json");
    const LocateResult lr = locate_resonances(m, Rectangle{0.0, 2.0, -0.5, -1e-4});
    REQUIRE(lr.found.size() == 1);
    const GamovVector gv = gamov_vector(m, lr.found.front());
    CHECK(std::abs(gv.k0(0)) > 1e-3);
    CHECK(std::abs(gv.k0(1)) < 1e-10);
    CHECK_THROWS_AS(gamov_vector(m, lr.found.front(), 5), std::invalid_argument);
}

TEST_CASE("dirac value of a gaussian probe is in closed form") {
    ScalarFixture fx;
    CMatrix c(1, 1);
    c << 1.0;
    const TestFunction s = TestFunction::gauss_poly(c);
    const Complex got = dirac_pairing(fx.gv, s);
    const Complex expect =
        2.0 * kPi * kI * std::exp(-fx.gv.zeta * fx.gv.zeta / 2.0) * fx.gv.k0(0);
    CHECK(std::abs(got - expect) < 1e-10);
}

TEST_CASE("a probe vanishing at the mirror point pairs to zero") {
    ScalarFixture fx;
    CMatrix c(1, 2);
    c << -std::conj(fx.gv.zeta), 1.0;  // (z - conj(zeta)) * gaussian
    const TestFunction s = TestFunction::gauss_poly(c);
    CHECK(std::abs(dirac_pairing(fx.gv, s)) < 1e-12);
}

TEST_CASE("dirac pairing is linear in the vector and antilinear in the probe") {
    ScalarFixture fx;
    CMatrix c(1, 1);
    c << Complex(0.4, -1.1);
    const TestFunction s = TestFunction::gauss_poly(c);
    CMatrix cu(1, 1);
    cu << 1.0;
    const TestFunction unit = TestFunction::gauss_poly(cu);
    const Complex base = dirac_pairing(fx.gv, unit);
    CHECK(std::abs(dirac_pairing(fx.gv, s) - std::conj(Complex(0.4, -1.1)) * base) < 1e-12);
    GamovVector doubled = fx.gv;
    doubled.k0 *= 2.0;
    CHECK(std::abs(dirac_pairing(doubled, unit) - 2.0 * base) < 1e-12);
}

TEST_CASE("dirac pairing agrees with the continued-integral route") {
    ScalarFixture fx;
    for (const TestFunction& s : bundled_dirac_functions(1)) {
        const Complex direct = dirac_pairing(fx.gv, s);
        const Complex routed = dirac_pairing_psi_route(fx.m, fx.gv, s);
        CHECK(std::abs(direct - routed) < 1e-6);
    }
}

TEST_CASE("hardy pairing of a double pole is in closed form") {
    ScalarFixture fx;
    CMatrix amp(1, 1);
    amp << 1.0;
    const TestFunction s = TestFunction::rational_lower({Complex(0.0, -1.0)}, {2}, amp);
    const PaleyWienerCheck pw = paley_wiener_check(fx.gv, s);
    CHECK(pw.rel_err < 1e-8);
    CHECK_FALSE(pw.absolute_fallback);
    const Complex expect =
        2.0 * kPi * kI * fx.gv.k0(0) / ((fx.gv.zeta - kI) * (fx.gv.zeta - kI));
    CHECK(std::abs(pw.rhs - expect) < 1e-12);
}

TEST_CASE("a probe vanishing at the evaluation point gives zero on both routes") {
    ScalarFixture fx;
    CMatrix amp(1, 2);
    amp << 1.0, -(std::conj(fx.gv.zeta) + kI);
    const TestFunction s =
        TestFunction::rational_lower({Complex(0.0, -1.0), Complex(0.0, -1.0)}, {2, 3}, amp);
    const PaleyWienerCheck pw = paley_wiener_check(fx.gv, s);
    CHECK(pw.absolute_fallback);
    CHECK(std::abs(pw.lhs) < 1e-9);
    CHECK(std::abs(pw.rhs) < 1e-12);
}

TEST_CASE("randomized hardy probes reproduce the point evaluation") {
    ScalarFixture fx;
    for (const TestFunction& s : TestFunction::random_rational(1, 10, 20260814ull)) {
        for (Complex p : s.poles()) CHECK(p.imag() < -0.5 + 1e-12);
        const PaleyWienerCheck pw = paley_wiener_check(fx.gv, s);
        CHECK(pw.rel_err < 1e-8);
    }
}

TEST_CASE("weak eigen-defect vanishes at the zero and flags a shifted one") {
    ScalarFixture fx;
    const CVector e0 = fx.gv.e0;
    const auto probes = bundled_probe_elements(1);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(weak_eigen_defect(fx.m, fx.gv.zeta, e0, probes[i]) < 1e-8);
        CHECK(weak_eigen_defect(fx.m, fx.gv.zeta + 0.1, e0, probes[i]) > 1e-3);
    }
}

TEST_CASE("the pairing is holomorphic off the axis") {
    ScalarFixture fx;
    const CVector e0 = unit1();
    const TestFunction x = coupling_representer(fx.m, e0);
    auto f = [&](Complex z) { return pairing_phi0(fx.m, z, e0, x); };
    const double h = 1e-4;
    const Complex z0(0.0, 2.0);
    const Complex fx_d = (f(z0 + h) - f(z0 - h)) / (2.0 * h);
    const Complex fy_d = (f(z0 + h * kI) - f(z0 - h * kI)) / (2.0 * h);
    CHECK(std::abs(fx_d + kI * fy_d) < 1e-6);
}

TEST_CASE("the pairing decays far from the spectral weight") {
    ScalarFixture fx;
    const CVector e0 = unit1();
    const TestFunction x = coupling_representer(fx.m, e0);
    const double near = std::abs(pairing_phi0(fx.m, Complex(0, 2), e0, x));
    const double far = std::abs(pairing_phi0(fx.m, Complex(0, 40), e0, x));
    CHECK(far < 0.1 * near);
}

TEST_CASE("pairing rejects on-axis evaluation points") {
    ScalarFixture fx;
    const CVector e0 = unit1();
    const TestFunction x = coupling_representer(fx.m, e0);
    CHECK_THROWS_AS(pairing_phi0(fx.m, Complex(1.0, 0.0), e0, x), std::invalid_argument);
}

TEST_CASE("the matrix element agrees along both quadrature routes") {
    ScalarFixture fx;
    const CVector e0 = unit1();
    for (Complex z : {Complex(0.0, 2.0), Complex(0.5, 0.2)}) {
        const TwoRouteIdentity id = livsic_two_route(fx.m, z, e0, e0);
        CHECK(id.rel_err < 1e-8);
    }
}

TEST_CASE("the coupled representer is the shifted level polynomial") {
    ScalarFixture fx;
    const TestFunction x = coupling_representer(fx.m, unit1());
    CHECK(std::abs(x(Complex(3.0, 0.0))(0) - 2.0) < 1e-14);
}

TEST_CASE("a zero probe integrates to the zero vector") {
    ScalarFixture fx;
    const TestFunction s = TestFunction::polynomial(CMatrix::Zero(1, 1));
    CHECK(psi_minus(fx.m, Complex(0.5, 0.2), s).norm() < 1e-15);
}

TEST_CASE("the lower-branch continuation differs by the computed jump") {
    ScalarFixture fx;
    CMatrix c(1, 1);
    c << 1.0;
    const TestFunction s = TestFunction::gauss_poly(c);
    const Complex w(0.5, 0.2);
    const CVector below = psi_lower_continued(fx.m, w, s);
    const CVector above = psi_minus(fx.m, w, s);
    const CMatrix lc = eval_L(fx.m, std::conj(w), Branch::plus_continued).matrix;
    const CVector jump = 2.0 * kPi * kI *
                         (lc.inverse().adjoint() * fx.m.M(std::conj(w)).adjoint() * s(w));
    CHECK((below - above - jump).norm() < 1e-8);
}

TEST_CASE("test-function families evaluate and transform in closed form") {
    CMatrix c(1, 2);
    c << 1.0, 2.0;
    const TestFunction p = TestFunction::polynomial(c);
    CHECK(std::abs(p(Complex(1.0, 1.0))(0) - Complex(3.0, 2.0)) < 1e-14);

    const TestFunction zp = p.times_lambda();
    const Complex z(1.3, 0.0);
    CHECK(std::abs(zp(z)(0) - z * p(z)(0)) < 1e-14);

    CMatrix ci(1, 1);
    ci << kI;
    const TestFunction g = TestFunction::gauss_poly(ci);
    const Complex zz(0.7, 0.2);
    CHECK(std::abs(g.reflected(zz)(0) - std::conj(g(std::conj(zz))(0))) < 1e-14);

    CMatrix amp(1, 1);
    amp << 1.0;
    const TestFunction r = TestFunction::rational_lower({Complex(0.2, -0.8)}, {1}, amp);
    CHECK_FALSE(r.entire());
    CHECK(r.lower_clearance() == doctest::Approx(0.8));
    CHECK_THROWS_AS(r.times_lambda(), std::invalid_argument);
    CHECK_THROWS_AS(
        TestFunction::rational_lower({Complex(0.0, 0.5)}, {1}, amp),
        std::invalid_argument);

    const auto batch = TestFunction::random_rational(2, 10, 7ull);
    CHECK(batch.size() == 10);
    for (const auto& f : batch) CHECK(f.dim() == 2);
}

}  // TEST_SUITE
