#include "resokit/livsic.hpp"

#include <cmath>

namespace resokit {

namespace {

// Cauchy transform of B over the truncated window with the pole handled in
// closed form: the divided difference (B(mu)-B(z))/(z-mu) is entire in mu, so
// plain panels converge no matter how close z sits to the axis; the subtracted
// part integrates to B(z)*log((z-lo)/(z-hi)). Far from the axis the
// subtraction is both unnecessary and unsafe (B(z) grows like
// exp(width*(Im z)^2/2)), so the plain kernel is integrated directly there.
constexpr double kDividedDifferenceBand = 1.0;

QuadResult<CMatrix> cauchy_offaxis(const ModelSpec& m, Complex z, const QuadOptions& opts) {
    const double w = m.envelope_halfwidth();
    if (std::abs(z.imag()) > kDividedDifferenceBand) {
        auto plain = [&](double mu) -> CMatrix { return m.B(mu) / (z - mu); };
        return integrate_interval(plain, -w, w, opts);
    }
    const double lo = std::min(-w, z.real() - 2.0);
    const double hi = std::max(w, z.real() + 2.0);
    const CMatrix bz = m.B(z);
    auto dd = [&](double mu) -> CMatrix { return (m.B(mu) - bz) / (z - mu); };
    auto res = integrate_interval(dd, lo, hi, opts);
    res.value += bz * (std::log(z - lo) - std::log(z - hi));
    return res;
}

// d/dz of the transform, same construction one derivative up
QuadResult<CMatrix> cauchy_deriv_offaxis(const ModelSpec& m, Complex z,
                                         const QuadOptions& opts) {
    const double w = m.envelope_halfwidth();
    if (std::abs(z.imag()) > kDividedDifferenceBand) {
        auto plain = [&](double mu) -> CMatrix {
            const Complex d = z - mu;
            return m.B(mu) / (d * d);
        };
        return integrate_interval(plain, -w, w, opts);
    }
    const double lo = std::min(-w, z.real() - 2.0);
    const double hi = std::max(w, z.real() + 2.0);
    const CMatrix bz = m.B(z);
    const CMatrix bpz = m.B_prime(z);
    auto dd2 = [&](double mu) -> CMatrix {
        const Complex d = z - mu;
        return (m.B(mu) - bz + d * bpz) / (d * d);
    };
    auto res = integrate_interval(dd2, lo, hi, opts);
    res.value += bz * (1.0 / (z - hi) - 1.0 / (z - lo));
    res.value -= bpz * (std::log(z - lo) - std::log(z - hi));
    // this is integral B/(z-mu)^2 = -d/dz Cauchy
    return res;
}

CMatrix shifted_identity(const ModelSpec& m, Complex z) {
    return z * CMatrix::Identity(m.n, m.n) - m.lambda0.cast<Complex>();
}

}  // namespace

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::plus_upper: return "plus_upper";
        case Branch::plus_boundary: return "plus_boundary";
        case Branch::plus_continued: return "plus_continued";
        case Branch::minus_lower: return "minus_lower";
        case Branch::minus_boundary: return "minus_boundary";
    }
    return "?";
}

LivsicValue eval_L(const ModelSpec& m, Complex z, Branch branch, const QuadOptions& opts) {
    LivsicValue out;
    out.z = z;
    out.branch = branch;

    switch (branch) {
        case Branch::plus_upper: {
            if (z.imag() <= 0.0)
                throw std::invalid_argument("plus_upper requires Im z > 0");
            auto c = cauchy_offaxis(m, z, opts);
            out.matrix = shifted_identity(m, z) - c.value;
            out.err = c.abs_err_estimate;
            break;
        }
        case Branch::minus_lower: {
            if (z.imag() >= 0.0)
                throw std::invalid_argument("minus_lower requires Im z < 0");
            auto c = cauchy_offaxis(m, z, opts);
            out.matrix = shifted_identity(m, z) - c.value;
            out.err = c.abs_err_estimate;
            break;
        }
        case Branch::plus_continued: {
            if (z.imag() >= 0.0)
                throw std::invalid_argument("plus_continued requires Im z < 0");
            if (!m.region.contains(z))
                throw std::invalid_argument("plus_continued requires z in the continuation region");
            auto c = cauchy_offaxis(m, z, opts);
            out.matrix = shifted_identity(m, z) - c.value + 2.0 * kPi * kI * m.B(z);
            out.err = c.abs_err_estimate;
            break;
        }
        case Branch::plus_boundary:
        case Branch::minus_boundary: {
            if (z.imag() != 0.0)
                throw std::invalid_argument("boundary branches require Im z = 0");
            const double lam = z.real();
            auto pv = pv_integrate([&](double mu) -> CMatrix { return m.B(mu); }, lam,
                                   m.envelope_halfwidth(), opts);
            const Complex side = (branch == Branch::plus_boundary) ? kI : -kI;
            out.matrix = shifted_identity(m, z) - pv.value + side * kPi * m.B(lam);
            out.err = pv.abs_err_estimate;
            break;
        }
    }
    return out;
}

CMatrix eval_L_derivative(const ModelSpec& m, Complex z, Branch branch,
                          const QuadOptions& opts) {
    if (branch != Branch::plus_upper && branch != Branch::plus_continued)
        throw std::invalid_argument("derivative defined for plus_upper and plus_continued");
    if (branch == Branch::plus_upper && z.imag() <= 0.0)
        throw std::invalid_argument("plus_upper requires Im z > 0");
    if (branch == Branch::plus_continued && z.imag() >= 0.0)
        throw std::invalid_argument("plus_continued requires Im z < 0");

    auto d2 = cauchy_deriv_offaxis(m, z, opts);
    CMatrix out = CMatrix::Identity(m.n, m.n) + d2.value;
    if (branch == Branch::plus_continued) out += 2.0 * kPi * kI * m.B_prime(z);
    return out;
}

AxisClearance check_assumption2(const ModelSpec& m, double step, const QuadOptions& opts) {
    auto [lo, hi] = m.scan_range();
    AxisClearance rep;
    rep.min_abs_det = std::numeric_limits<double>::infinity();
    const int steps = static_cast<int>(std::ceil((hi - lo) / step));
    for (int k = 0; k <= steps; ++k) {
        const double lam = std::min(lo + k * step, hi);
        const auto L = eval_L(m, Complex(lam, 0.0), Branch::plus_boundary, opts);
        const double d = std::abs(Eigen::PartialPivLU<CMatrix>(L.matrix).determinant());
        if (d < rep.min_abs_det) {
            rep.min_abs_det = d;
            rep.argmin_lambda = lam;
        }
    }
    rep.pass = rep.min_abs_det > 1e-8;
    return rep;
}

}  // namespace resokit
