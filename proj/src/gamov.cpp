#include "resokit/gamov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "resokit/scattering.hpp"

namespace resokit {

namespace {

// transpose-free bilinear sum a_j b_j (no conjugation)
Complex plain_dot(const CVector& a, const CVector& b) {
    return a.cwiseProduct(b).sum();
}

CVector poly_eval_vec(const CMatrix& coeffs, Complex z) {
    const auto rows = coeffs.rows();
    CVector out(rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
        Complex acc = 0.0;
        for (Eigen::Index k = coeffs.cols() - 1; k >= 0; --k) acc = acc * z + coeffs(j, k);
        out[j] = acc;
    }
    return out;
}

// subinterval edges bracketing the sharp axis features: the level spectrum
// (where the boundary Livsic matrix dips) and the kernel point
std::vector<double> axis_cuts(const ModelSpec& m, std::initializer_list<double> extra) {
    std::vector<double> cuts;
    for (Eigen::Index i = 0; i < m.level_eigenvalues().size(); ++i) {
        const double ev = m.level_eigenvalues()[i];
        cuts.push_back(ev - 0.75);
        cuts.push_back(ev + 0.75);
    }
    for (double c : extra) {
        cuts.push_back(c - 0.75);
        cuts.push_back(c + 0.75);
    }
    return cuts;
}

std::pair<double, double> axis_window(const ModelSpec& m, double reach) {
    const double w = m.envelope_halfwidth();
    return {std::min(-w, reach - 2.0), std::max(w, reach + 2.0)};
}

}  // namespace

GamovVector gamov_vector(const ModelSpec& m, const Resonance& res, int e0_index,
                         const QuadOptions& opts) {
    (void)opts;
    if (e0_index < 0 || e0_index >= res.q || res.kernel_basis.cols() <= e0_index)
        throw std::invalid_argument("kernel index out of range");
    GamovVector gv;
    gv.zeta = res.zeta;
    gv.e0 = res.kernel_basis.col(e0_index);
    gv.k0 = m.M(res.zeta) * gv.e0;
    if (gv.k0.norm() < 1e-12)
        throw KitError("form factor not invertible at the resonance");
    return gv;
}

TestFunction TestFunction::polynomial(const CMatrix& coeffs) {
    if (coeffs.rows() == 0 || coeffs.cols() == 0)
        throw std::invalid_argument("empty coefficient table");
    TestFunction f;
    f.family_ = Family::polynomial;
    f.dim_ = static_cast<int>(coeffs.rows());
    f.weights_ = coeffs;
    return f;
}

TestFunction TestFunction::gauss_poly(const CMatrix& coeffs) {
    TestFunction f = polynomial(coeffs);
    f.family_ = Family::gauss_poly;
    return f;
}

TestFunction TestFunction::rational_lower(const std::vector<Complex>& poles,
                                          const std::vector<int>& orders,
                                          const CMatrix& amplitudes) {
    if (poles.empty() || poles.size() != orders.size() ||
        amplitudes.cols() != static_cast<Eigen::Index>(poles.size()) || amplitudes.rows() == 0)
        throw std::invalid_argument("pole table shape mismatch");
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (!(poles[i].imag() < 0.0)) throw std::invalid_argument("poles must lie below the axis");
        if (orders[i] < 1) throw std::invalid_argument("pole order must be positive");
    }
    TestFunction f;
    f.family_ = Family::rational_lower;
    f.dim_ = static_cast<int>(amplitudes.rows());
    f.weights_ = amplitudes;
    f.poles_ = poles;
    f.orders_ = orders;
    return f;
}

std::vector<TestFunction> TestFunction::random_rational(int dim, int count,
                                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-2.0, 2.0);
    std::uniform_real_distribution<double> im(-2.0, -0.5);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<TestFunction> out;
    out.reserve(count);
    for (int c = 0; c < count; ++c) {
        std::vector<Complex> poles = {Complex(re(rng), im(rng)), Complex(re(rng), im(rng))};
        std::vector<int> orders = {2, 2};
        CMatrix a(dim, 2);
        for (int j = 0; j < dim; ++j)
            for (int p = 0; p < 2; ++p) a(j, p) = Complex(amp(rng), amp(rng));
        out.push_back(rational_lower(poles, orders, a));
    }
    return out;
}

CVector TestFunction::operator()(Complex z) const {
    switch (family_) {
        case Family::polynomial:
            return poly_eval_vec(weights_, z);
        case Family::gauss_poly:
            return poly_eval_vec(weights_, z) * std::exp(-0.5 * z * z);
        case Family::rational_lower: {
            CVector out = CVector::Zero(dim_);
            for (std::size_t p = 0; p < poles_.size(); ++p) {
                const Complex den = std::pow(z - poles_[p], orders_[p]);
                out += weights_.col(p) / den;
            }
            return out;
        }
    }
    return CVector::Zero(dim_);
}

CVector TestFunction::reflected(Complex z) const {
    return (*this)(std::conj(z)).conjugate();
}

TestFunction TestFunction::times_lambda() const {
    if (family_ == Family::rational_lower)
        throw std::invalid_argument("rational family cannot absorb a polynomial factor");
    TestFunction f = *this;
    CMatrix shifted = CMatrix::Zero(dim_, weights_.cols() + 1);
    shifted.rightCols(weights_.cols()) = weights_;
    f.weights_ = shifted;
    return f;
}

double TestFunction::lower_clearance() const {
    if (entire()) return std::numeric_limits<double>::infinity();
    double d = std::numeric_limits<double>::infinity();
    for (const Complex& p : poles_) d = std::min(d, -p.imag());
    return d;
}

TestFunction coupling_representer(const ModelSpec& m, const CVector& e) {
    if (e.size() != m.n) throw std::invalid_argument("dimension mismatch");
    CMatrix coeffs(m.n, 2);
    coeffs.col(0) = -(m.lambda0.cast<Complex>() * e);
    coeffs.col(1) = e;
    return TestFunction::polynomial(coeffs);
}

namespace {

// residue at mu = zeta of the integrand's holomorphic extension below the
// axis: -(A(zeta), L(zeta) e0) with A = L_-^{-1} B L^{-1} x*, all factors on
// their continued branches
Complex pairing_residue(const ModelSpec& m, Complex zeta, const CVector& e0,
                        const CMatrix& lz, const TestFunction& x,
                        const QuadOptions& opts) {
    const CVector xs = x.reflected(zeta);
    const CMatrix lm = eval_L(m, zeta, Branch::minus_lower, opts).matrix;
    const CMatrix b = m.B(zeta);
    Eigen::JacobiSVD<CMatrix> svd(lz);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-6 * sv(0)) {
        // at a polished resonance pair the simple pole of the inverse cancels
        // the kernel zero; the limit value avoids the ill-conditioned solve.
        // valid when e0 spans the kernel at zeta, which is how callers reach
        // this branch
        const CMatrix lp = eval_L_derivative(m, zeta, Branch::plus_continued, opts);
        const CVector lpe = lp * e0;
        const Complex kappa = plain_dot(e0, lpe);
        const Complex num = plain_dot(e0, CVector(b * lm.partialPivLu().solve(lpe)));
        return -plain_dot(xs, e0) * num / kappa;
    }
    const CVector y = lz.partialPivLu().solve(xs);
    const CVector a = lm.partialPivLu().solve(CVector(b * y));
    return -plain_dot(a, CVector(lz * e0));
}

}  // namespace

Complex pairing_phi0(const ModelSpec& m, Complex zeta, const CVector& e0,
                     const TestFunction& x, const QuadOptions& opts) {
    if (zeta.imag() == 0.0) throw std::invalid_argument("zeta must be off the real axis");
    if (e0.size() != m.n || x.dim() != m.n) throw std::invalid_argument("dimension mismatch");

    const Branch zb = zeta.imag() > 0.0 ? Branch::plus_upper : Branch::plus_continued;
    const CMatrix lz = eval_L(m, zeta, zb, opts).matrix;
    const CVector le0 = lz * e0;
    SpectralDensity dens(m, opts);

    auto f = [&](double mu) -> Complex {
        const CVector dx = dens(mu) * x(Complex(mu, 0.0));
        const CVector v = (zeta - mu) * e0 - le0;
        return dx.dot(v) / (mu - zeta);
    };
    const auto [lo, hi] = axis_window(m, zeta.real());
    Complex val = integrate_split(f, lo, hi, axis_cuts(m, {zeta.real()}), opts).value;
    if (zeta.imag() < 0.0)
        val += 2.0 * kPi * kI * pairing_residue(m, zeta, e0, lz, x, opts);
    return val;
}

CVector density_moment(const ModelSpec& m, const TestFunction& x, const QuadOptions& opts) {
    if (x.dim() != m.n) throw std::invalid_argument("dimension mismatch");
    SpectralDensity dens(m, opts);
    auto f = [&](double mu) -> CVector { return dens(mu) * x(Complex(mu, 0.0)); };
    const auto [lo, hi] = axis_window(m, 0.0);
    return integrate_split(f, lo, hi, axis_cuts(m, {}), opts).value;
}

double weak_eigen_defect(const ModelSpec& m, Complex zeta, const CVector& e0,
                         const TestFunction& x, const QuadOptions& opts) {
    if (zeta.imag() == 0.0) throw std::invalid_argument("zeta must be off the real axis");
    if (e0.size() != m.n || x.dim() != m.n) throw std::invalid_argument("dimension mismatch");

    const Branch zb = zeta.imag() > 0.0 ? Branch::plus_upper : Branch::plus_continued;
    const CMatrix lz = eval_L(m, zeta, zb, opts).matrix;
    const CVector le0 = lz * e0;
    SpectralDensity dens(m, opts);
    const int n = m.n;

    // one packed pass: pairing against x, against mu*x, and the two density
    // moments; a shared grid keeps the costly density evaluations single
    auto f = [&](double mu) -> CVector {
        const CVector dx = dens(mu) * x(Complex(mu, 0.0));
        const CVector v = (zeta - mu) * e0 - le0;
        const Complex fx = dx.dot(v) / (mu - zeta);
        CVector out(2 + 2 * n);
        out[0] = fx;
        out[1] = mu * fx;
        out.segment(2, n) = dx;
        out.segment(2 + n, n) = mu * dx;
        return out;
    };
    const auto [lo, hi] = axis_window(m, zeta.real());
    const CVector packed = integrate_split(f, lo, hi, axis_cuts(m, {zeta.real()}), opts).value;

    const Complex pair_x = packed[0];
    const Complex pair_mux = packed[1];
    const CVector e_x = packed.segment(2, n);
    const CVector e_mux = packed.segment(2 + n, n);

    // below the axis both pairings pick up a continuation residue, but the
    // residue is linear in the reflected representer and reflecting mu*x
    // multiplies it by zeta, so the two residue terms cancel in this
    // combination and the axis integrals suffice
    const Complex defect =
        (pair_mux + e_mux.dot(e0)) - zeta * (pair_x + e_x.dot(e0));
    return std::abs(defect);
}

TwoRouteIdentity livsic_two_route(const ModelSpec& m, Complex z, const CVector& e,
                                  const CVector& e0, const QuadOptions& opts) {
    if (e.size() != m.n || e0.size() != m.n)
        throw std::invalid_argument("dimension mismatch");
    const Complex pair = pairing_phi0(m, z, e0, coupling_representer(m, e), opts);
    const Branch zb = z.imag() > 0.0 ? Branch::plus_upper : Branch::plus_continued;
    TwoRouteIdentity out;
    out.lhs = e.dot(CVector(z * e0 - m.lambda0.cast<Complex>() * e0)) - pair;
    out.rhs = e.dot(CVector(eval_L(m, z, zb, opts).matrix * e0));
    out.rel_err = std::abs(out.lhs - out.rhs) /
                  std::max(std::abs(out.rhs), std::numeric_limits<double>::min());
    return out;
}

namespace {

// L_-(z)^{-1} M(z)^T s(z) on or below the axis
CVector hardy_kernel_vec(const ModelSpec& m, Complex z, const TestFunction& s,
                         const QuadOptions& opts) {
    const Branch br = z.imag() < 0.0 ? Branch::minus_lower : Branch::minus_boundary;
    const CMatrix lm = eval_L(m, z, br, opts).matrix;
    return lm.partialPivLu().solve(CVector(m.M(z).transpose() * s(z)));
}

// the same function continued across the axis from below
CVector hardy_kernel_vec_up(const ModelSpec& m, Complex z, const TestFunction& s,
                            const QuadOptions& opts) {
    const CMatrix l = eval_L(m, z, Branch::plus_upper, opts).matrix -
                      2.0 * kPi * kI * m.B(z);
    return l.partialPivLu().solve(CVector(m.M(z).transpose() * s(z)));
}

}  // namespace

CVector psi_minus(const ModelSpec& m, Complex w, const TestFunction& s,
                  const QuadOptions& opts) {
    if (w.imag() == 0.0) throw std::invalid_argument("w must be off the real axis");
    if (s.dim() != m.n) throw std::invalid_argument("dimension mismatch");

    // drop the path below the axis, where the integrand continues without
    // poles; the kernel pole is then far from the path for near-axis w
    double depth = std::min(0.75, 0.5 * s.lower_clearance());
    if (w.imag() < 0.0 && std::abs(-w.imag() - depth) < 0.1 * depth) depth *= 0.5;
    const bool pick_up_pole = w.imag() < 0.0 && -w.imag() < depth;

    const auto [lo, hi] = axis_window(m, w.real());
    auto f = [&](double t) -> CVector {
        const Complex z(t, -depth);
        return hardy_kernel_vec(m, z, s, opts) / (w - z);
    };
    // tail legs back up to the axis are Gaussian-small at the window edge and
    // are dropped
    CVector val = integrate_split(f, lo, hi, axis_cuts(m, {w.real()}), opts).value;
    if (pick_up_pole)
        val += 2.0 * kPi * kI * hardy_kernel_vec(m, w, s, opts);
    return val;
}

CVector psi_lower_continued(const ModelSpec& m, Complex w, const TestFunction& s,
                            double bump_halfwidth, double bump_height,
                            const QuadOptions& opts) {
    if (!(w.imag() > 0.0))
        throw std::invalid_argument("continuation target must lie above the axis");
    if (s.dim() != m.n) throw std::invalid_argument("dimension mismatch");
    double h = bump_height > 0.0 ? bump_height : std::max(0.3, 2.0 * w.imag());
    if (h <= w.imag()) throw std::invalid_argument("bump must pass above w");

    const double depth = std::min(0.5, 0.5 * s.lower_clearance());
    const double a = w.real() - bump_halfwidth;
    const double b = w.real() + bump_halfwidth;
    const auto [lo, hi] = axis_window(m, w.real());

    auto field = [&](Complex z) -> CVector {
        const CVector x = z.imag() > 0.0 ? hardy_kernel_vec_up(m, z, s, opts)
                                         : hardy_kernel_vec(m, z, s, opts);
        return x / (w - z);
    };
    auto segment = [&](Complex z0, Complex z1, const std::vector<double>& cuts) -> CVector {
        const Complex d = z1 - z0;
        auto g = [&](double t) -> CVector { return CVector(field(z0 + t * d) * d); };
        return integrate_split(g, 0.0, 1.0, cuts, opts).value;
    };
    auto map_cuts = [&](double z0re, double z1re,
                        const std::vector<double>& lam_cuts) -> std::vector<double> {
        std::vector<double> out;
        const double span = z1re - z0re;
        for (double c : lam_cuts) {
            const double t = (c - z0re) / span;
            if (t > 0.0 && t < 1.0) out.push_back(t);
        }
        return out;
    };

    // lo -> a and b -> hi run below the axis; the rectangle a -> a+ih -> b+ih
    // -> b carries the path over w on the continued branch
    const auto cuts = axis_cuts(m, {w.real()});
    CVector val = segment({lo, -depth}, {a, -depth}, map_cuts(lo, a, cuts));
    val += segment({a, -depth}, {a, h}, {});
    val += segment({a, h}, {b, h}, map_cuts(a, b, cuts));
    val += segment({b, h}, {b, -depth}, {});
    val += segment({b, -depth}, {hi, -depth}, map_cuts(b, hi, cuts));
    return val;
}

Complex dirac_pairing(const GamovVector& gv, const TestFunction& s) {
    const CVector sv = s(std::conj(gv.zeta));
    return 2.0 * kPi * kI * sv.dot(gv.k0);
}

Complex dirac_pairing_psi_route(const ModelSpec& m, const GamovVector& gv,
                                const TestFunction& s, const QuadOptions& opts) {
    const Complex zbar = std::conj(gv.zeta);
    const CVector a = m.M(gv.zeta).adjoint() * s(zbar);
    const Complex term1 = 2.0 * kPi * kI * a.dot(gv.e0);
    const CVector psi = psi_minus(m, zbar, s, opts);
    const CMatrix lc = eval_L(m, gv.zeta, Branch::plus_continued, opts).matrix;
    return term1 + psi.dot(CVector(lc * gv.e0));
}

PaleyWienerCheck paley_wiener_check(const GamovVector& gv, const TestFunction& s,
                                    const QuadOptions& opts) {
    // compactify the line; rational decay makes the mapped integrand bounded
    auto f = [&](double th) -> Complex {
        const double c = std::cos(th);
        const double lam = 4.0 * std::tan(th);
        const double jac = 4.0 / (c * c);
        return s(Complex(lam, 0.0)).dot(gv.k0) / (gv.zeta - lam) * jac;
    };
    const double th0 = std::atan(gv.zeta.real() / 4.0);
    PaleyWienerCheck out;
    out.lhs = integrate_split(f, -0.5 * kPi, 0.5 * kPi, {th0 - 0.3, th0 + 0.3}, opts).value;
    out.rhs = dirac_pairing(gv, s);
    const double scale = std::abs(out.rhs);
    if (scale < 1e-14) {
        out.absolute_fallback = true;
        out.rel_err = std::abs(out.lhs - out.rhs);
    } else {
        out.rel_err = std::abs(out.lhs - out.rhs) / scale;
    }
    return out;
}

std::vector<TestFunction> bundled_probe_elements(int dim) {
    std::vector<TestFunction> out;
    auto table = [&](std::initializer_list<double> cs) {
        CMatrix c = CMatrix::Zero(dim, static_cast<Eigen::Index>(cs.size()));
        int k = 0;
        for (double v : cs) {
            for (int j = 0; j < dim; ++j)
                c(j, k) = v * (j % 2 == 0 ? 1.0 : -0.5);
            ++k;
        }
        return TestFunction::gauss_poly(c);
    };
    out.push_back(table({1.0}));
    out.push_back(table({0.0, 1.0}));
    out.push_back(table({-1.0, 0.0, 1.0}));
    out.push_back(table({0.5, 0.25}));
    out.push_back(table({0.3, -0.2, 0.0, 0.1}));
    return out;
}

std::vector<TestFunction> bundled_dirac_functions(int dim) {
    std::vector<TestFunction> out;
    auto table = [&](std::initializer_list<double> cs) {
        CMatrix c = CMatrix::Zero(dim, static_cast<Eigen::Index>(cs.size()));
        int k = 0;
        for (double v : cs) {
            for (int j = 0; j < dim; ++j)
                c(j, k) = v / (1.0 + 0.5 * j);
            ++k;
        }
        return TestFunction::gauss_poly(c);
    };
    out.push_back(table({1.0}));
    out.push_back(table({0.0, 1.0}));
    out.push_back(table({1.0, 0.0, 0.5}));
    return out;
}

}  // namespace resokit
