#pragma once

// Shared fixtures for the test suites: bundled config access, an inline
// scalar-model factory, and closed-form oracles kept independent of the
// library's own quadrature paths.

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "resokit/model.hpp"
#include "resokit/types.hpp"

namespace testkit {

using resokit::Complex;
using resokit::kI;
using resokit::kPi;

inline std::string config_path(const char* name) {
    return std::string(RESOKIT_CONFIG_DIR) + "/" + name;
}

inline resokit::ModelSpec load_bundled(const char* name) {
    return resokit::load_model_file(config_path(name));
}

// scalar level lambda0 coupled through g * exp(-lambda^2/2)
inline resokit::ModelSpec scalar_gauss(double g, double lambda0) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  R"({"n":1,"lambda0":[[%.17g]],"formfactor":{"terms":[)"
                  R"({"row":0,"col":0,"coeffs":[%.17g],"width":1.0,"center":0.0}]},)"
                  R"("region":{"re_min":-4.0,"re_max":4.0,"im_min":-2.0,"im_max":2.0}})",
                  lambda0, g);
    return resokit::parse_model(buf);
}

// ---- frozen reference values (computed once from independent oracles) ----

// sqrt(pi) and pi/e
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kPiOverE = 1.1557273497909217179;
// PV of e^{-mu^2}/(1-mu) = 2 sqrt(pi) DawsonF(1), DawsonF(1) = 0.53807950691276841914
inline constexpr double kPvGaussAtOne = 1.9074421882417552323;

// zero of z - 1 + 0.01*i*pi*w(z) located by high-precision Newton on the
// entire closed form below (g = 0.1, lambda0 = 1 scalar model)
inline const Complex kZeta0{1.0192693750234245, -0.011077986399268921};
// second-order small-coupling estimate lambda0 + g^2(PV - i pi e^{-1})
inline const Complex kZetaPerturbative{1.0190744218824176, -0.011557273497909217};
// mirror-model zero (lambda0 = -1): exactly -conj(kZeta0) by reflection symmetry
inline const Complex kZetaMirror{-1.0192693750234245, -0.011077986399268921};

// ---- Faddeeva function w(z) = e^{-z^2} erfc(-iz) by its entire Taylor
// series sum (iz)^n / Gamma(n/2 + 1); adequate in double precision for
// |z| <~ 3, which covers every test point ----
inline Complex faddeeva(Complex z) {
    Complex term(1.0, 0.0);  // (iz)^n before the Gamma division
    const Complex iz = kI * z;
    Complex sum(0.0, 0.0);
    for (int n = 0; n < 160; ++n) {
        const Complex contrib = term / std::tgamma(0.5 * n + 1.0);
        sum += contrib;
        if (n > 8 && std::abs(contrib) < 1e-18 * std::abs(sum)) break;
        term *= iz;
    }
    return sum;
}

// w'(z) = -2 z w(z) + 2i/sqrt(pi)
inline Complex faddeeva_prime(Complex z) {
    return -2.0 * z * faddeeva(z) + 2.0 * kI / kSqrtPi;
}

// closed form of the plus-branch family for the scalar gaussian model:
// valid in the upper half-plane, on the axis, and as the continuation below
// (the expression is entire)
inline Complex scalar_L_plus(Complex z, double g = 0.1, double lambda0 = 1.0) {
    return z - lambda0 + g * g * kI * kPi * faddeeva(z);
}

inline Complex scalar_L_plus_prime(Complex z, double g = 0.1) {
    return 1.0 + g * g * kI * kPi * faddeeva_prime(z);
}

// minus branch in the lower half-plane (reflected series)
inline Complex scalar_L_minus(Complex z, double g = 0.1, double lambda0 = 1.0) {
    return z - lambda0 - g * g * kI * kPi * faddeeva(-z);
}

}  // namespace testkit
