#pragma once

#include <cstdint>
#include <vector>

#include "resokit/livsic.hpp"
#include "resokit/model.hpp"
#include "resokit/resonance.hpp"
#include "resokit/types.hpp"

namespace resokit {

// Inner products are antilinear in the FIRST slot throughout this module
// (Eigen's dot() convention); the sign-audit test pins this choice.

struct GamovVector {
    Complex zeta;  // resonance position
    CVector e0;    // unit kernel element of the continued Livsic matrix
    CVector k0;    // form factor applied to e0 at the resonance

    CVector at(double lambda) const { return k0 / (zeta - lambda); }
};

GamovVector gamov_vector(const ModelSpec& m, const Resonance& res, int e0_index = 0,
                         const QuadOptions& opts = {});

// closed-form test functions from declared families, so analyticity domains
// are known by construction instead of being detected numerically
class TestFunction {
  public:
    enum class Family { polynomial, gauss_poly, rational_lower };

    // s_j(z) = sum_k coeffs(j, k) z^k
    static TestFunction polynomial(const CMatrix& coeffs);
    // s_j(z) = (sum_k coeffs(j, k) z^k) * exp(-z^2/2)
    static TestFunction gauss_poly(const CMatrix& coeffs);
    // s_j(z) = sum_m amplitudes(j, m) / (z - poles[m])^orders[m], poles below the axis
    static TestFunction rational_lower(const std::vector<Complex>& poles,
                                       const std::vector<int>& orders,
                                       const CMatrix& amplitudes);
    // reproducible batch of rational functions with double poles below the axis
    static std::vector<TestFunction> random_rational(int dim, int count, std::uint64_t seed);

    CVector operator()(Complex z) const;
    // conj(s(conj z)): the holomorphic mirror, equal to conj(s) on the axis
    CVector reflected(Complex z) const;
    // z * s(z) as a member of the same closed-form family (not for rationals)
    TestFunction times_lambda() const;

    Family family() const { return family_; }
    int dim() const { return dim_; }
    bool entire() const { return family_ != Family::rational_lower; }
    // depth of the strip below the axis that is free of singularities
    double lower_clearance() const;

    const std::vector<Complex>& poles() const { return poles_; }
    const std::vector<int>& pole_orders() const { return orders_; }
    const CMatrix& weights() const { return weights_; }

  private:
    TestFunction() = default;
    Family family_ = Family::polynomial;
    int dim_ = 0;
    CMatrix weights_;  // polynomial coefficients or pole amplitudes, row per channel
    std::vector<Complex> poles_;
    std::vector<int> orders_;
};

// representer of the coupled level vector e: x(mu) = (mu - lambda0) e
TestFunction coupling_representer(const ModelSpec& m, const CVector& e);

// <f_x | phi0x(zeta)> through the density formula; for zeta below the axis the
// value is the analytic continuation across the axis (adds the residue term)
Complex pairing_phi0(const ModelSpec& m, Complex zeta, const CVector& e0,
                     const TestFunction& x, const QuadOptions& opts = {});

// integral of D(mu) x(mu) over the axis
CVector density_moment(const ModelSpec& m, const TestFunction& x,
                       const QuadOptions& opts = {});

// weak residual of the eigen equation at (zeta, e0) probed by the element with
// representer x; small exactly when (zeta, e0) is a resonance pair
double weak_eigen_defect(const ModelSpec& m, Complex zeta, const CVector& e0,
                         const TestFunction& x, const QuadOptions& opts = {});

struct TwoRouteIdentity {
    Complex lhs;  // resolvent route: level term minus the density-route pairing
    Complex rhs;  // direct route: matrix element of L(z) by Cauchy transform
    double rel_err = 0.0;
};

// the matrix element (e, L(z) e0) computed along two independent quadrature
// routes; z off the real axis (below it the continued branch is used)
TwoRouteIdentity livsic_two_route(const ModelSpec& m, Complex z, const CVector& e,
                                  const CVector& e0, const QuadOptions& opts = {});

// Cauchy-type transform of L_-^{-1} M^T s, defined for w off the axis; the
// integration path is bent below the axis so near-axis w stays accurate
CVector psi_minus(const ModelSpec& m, Complex w, const TestFunction& s,
                  const QuadOptions& opts = {});

// analytic continuation of the lower-half-plane branch of psi_minus to a point
// above the axis, computed on an explicit deformed path (independent of the
// jump formula); the bump window must avoid continued-branch poles
CVector psi_lower_continued(const ModelSpec& m, Complex w, const TestFunction& s,
                            double bump_halfwidth = 0.3, double bump_height = 0.0,
                            const QuadOptions& opts = {});

// 2 pi i (s(conj zeta), k0)
Complex dirac_pairing(const GamovVector& gv, const TestFunction& s);

// same value through the continued-integral route; the psi term vanishes at an
// exact resonance because L e0 = 0 there
Complex dirac_pairing_psi_route(const ModelSpec& m, const GamovVector& gv,
                                const TestFunction& s, const QuadOptions& opts = {});

struct PaleyWienerCheck {
    Complex lhs;  // axis quadrature
    Complex rhs;  // point evaluation
    double rel_err = 0.0;
    bool absolute_fallback = false;  // |rhs| too small for a relative test
};

PaleyWienerCheck paley_wiener_check(const GamovVector& gv, const TestFunction& s,
                                    const QuadOptions& opts = {});

// fixed probe sets used by the verification suite
std::vector<TestFunction> bundled_probe_elements(int dim);
std::vector<TestFunction> bundled_dirac_functions(int dim);

}  // namespace resokit
