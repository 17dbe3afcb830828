#pragma once

// Numerical integration engine: composite Gauss-Legendre with panel doubling,
// principal-value integrals, circle/rectangle contours, winding numbers.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

#include "resokit/types.hpp"

namespace resokit {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-13;  // magnitude below which the relative test switches to absolute
    int max_panels = 1 << 14;
    int initial_panels = 4;
};

struct Rectangle {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

    bool valid() const { return re_min < re_max && im_min < im_max; }
    bool contains(Complex z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
               z.imag() <= im_max;
    }
    double diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }
    Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
};

struct Circle {
    Complex center;
    double radius = 0.0;
};

template <class T>
struct QuadResult {
    T value;
    double abs_err_estimate = 0.0;
    int panels_used = 0;
    bool converged = true;
};

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1]
const std::array<double, 16>& gl_nodes16();
const std::array<double, 16>& gl_weights16();

inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(const Complex& v) { return std::abs(v); }
inline double value_norm(const CVector& v) { return v.norm(); }
inline double value_norm(const CMatrix& v) { return v.norm(); }

inline void value_zero(double& v, double) { v = 0.0; }
inline void value_zero(Complex& v, const Complex&) { v = Complex(0.0, 0.0); }
inline void value_zero(CVector& v, const CVector& proto) { v = CVector::Zero(proto.size()); }
inline void value_zero(CMatrix& v, const CMatrix& proto) {
    v = CMatrix::Zero(proto.rows(), proto.cols());
}

// one composite pass with `panels` equal panels over [a, b]
template <class F, class T>
T composite_gl(F&& f, double a, double b, int panels, const T& proto) {
    const auto& xs = gl_nodes16();
    const auto& ws = gl_weights16();
    T acc;
    value_zero(acc, proto);
    const double len = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * len;
        const double half = 0.5 * len;
        const double mid = lo + half;
        for (int i = 0; i < 16; ++i) {
            acc += (ws[i] * half) * f(mid + half * xs[i]);
        }
    }
    return acc;
}

}  // namespace detail

// adaptive composite Gauss-Legendre over a finite interval
template <class F>
auto integrate_interval(F&& f, double a, double b, const QuadOptions& opts = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    QuadResult<T> out;
    if (a == b) {
        T proto = f(a);
        detail::value_zero(out.value, proto);
        return out;
    }
    int panels = std::max(1, opts.initial_panels);
    T proto = f(0.5 * (a + b));
    T prev = detail::composite_gl(f, a, b, panels, proto);
    while (true) {
        panels *= 2;
        T cur = detail::composite_gl(f, a, b, panels, proto);
        const double diff = detail::value_norm(T(cur - prev));
        const double scale = std::max(detail::value_norm(cur), opts.abs_floor);
        out.value = cur;
        out.abs_err_estimate = diff;
        out.panels_used = panels;
        if (diff <= opts.rel_tol * scale) {
            out.converged = true;
            return out;
        }
        if (panels >= opts.max_panels) {
            out.converged = false;
            return out;
        }
        prev = std::move(cur);
    }
}

// integral over the whole line of a fast-decaying integrand; the hint is the
// half-width of a window outside of which the integrand is negligible at the
// target tolerance
template <class F>
auto integrate_real_line(F&& f, double decay_width_hint, const QuadOptions& opts = {}) {
    const double w = std::max(1.0, decay_width_hint);
    return integrate_interval(std::forward<F>(f), -w, w, opts);
}

// PV integral of f(mu)/(pole - mu).  Symmetric split about the pole turns the
// inner part into the regular integrand [f(p-u) - f(p+u)]/u; its u->0 limit
// -2 f'(pole) is patched in via a one-time central difference.
template <class F>
auto pv_integrate(F&& f, double pole, double decay_width_hint = 12.0,
                  const QuadOptions& opts = {}) -> QuadResult<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    constexpr double kInner = 1.0;
    const double w = std::max(decay_width_hint, kInner + 1.0);
    const double lo = std::min(-w, pole - kInner - 1.0);
    const double hi = std::max(w, pole + kInner + 1.0);

    std::optional<T> deriv;  // lazily computed -2 f'(pole)
    auto symmetric = [&](double u) -> T {
        if (std::abs(u) < 1e-9) {
            if (!deriv) {
                const double h = 1e-6;
                deriv = T((f(pole - h) - f(pole + h)) / h);
            }
            return *deriv;
        }
        return T((f(pole - u) - f(pole + u)) / u);
    };
    auto inner = integrate_interval(symmetric, 0.0, kInner, opts);
    auto kernel = [&](double mu) -> T { return T(f(mu) / (pole - mu)); };
    auto left = integrate_interval(kernel, lo, pole - kInner, opts);
    auto right = integrate_interval(kernel, pole + kInner, hi, opts);

    QuadResult<T> out;
    out.value = T(inner.value + left.value + right.value);
    out.abs_err_estimate =
        inner.abs_err_estimate + left.abs_err_estimate + right.abs_err_estimate;
    out.panels_used = inner.panels_used + left.panels_used + right.panels_used;
    out.converged = inner.converged && left.converged && right.converged;
    return out;
}

// adaptive integration over [a, b] split at the given interior points, so a
// narrow feature near a known location only forces refinement of its own
// subinterval
template <class F>
auto integrate_split(F&& f, double a, double b, std::vector<double> cuts,
                     const QuadOptions& opts = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    QuadResult<T> out;
    bool first = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]);
        const double hi = std::min(b, cuts[i + 1]);
        if (!(hi > lo)) continue;
        auto piece = integrate_interval(f, lo, hi, opts);
        if (first) {
            out.value = piece.value;
            first = false;
        } else {
            out.value += piece.value;
        }
        out.abs_err_estimate += piece.abs_err_estimate;
        out.panels_used += piece.panels_used;
        out.converged = out.converged && piece.converged;
    }
    if (first) {
        T proto = f(a);
        detail::value_zero(out.value, proto);
    }
    return out;
}

// counterclockwise circle contour by the trapezoid rule; the error estimate
// compares against the half-node subsum
template <class F>
auto contour_circle(F&& f, const Circle& c, int nodes = 64, bool div_two_pi_i = false)
    -> QuadResult<std::decay_t<decltype(f(Complex{}))>> {
    using T = std::decay_t<decltype(f(Complex{}))>;
    if (nodes < 8) throw std::invalid_argument("node count must be at least 8");

    T proto = f(c.center + c.radius);
    T full, half;
    detail::value_zero(full, proto);
    detail::value_zero(half, proto);
    for (int k = 0; k < nodes; ++k) {
        const double th = 2.0 * kPi * k / nodes;
        const Complex dir = std::polar(1.0, th);
        const T term = T(f(c.center + c.radius * dir) * dir);
        full += term;
        if (k % 2 == 0) half += term;
    }
    const Complex scale = 2.0 * kPi * kI * c.radius;
    QuadResult<T> out;
    out.value = T(full * (scale / double(nodes)));
    T half_val = T(half * (scale / double(nodes / 2)));
    out.abs_err_estimate = detail::value_norm(T(out.value - half_val));
    out.panels_used = nodes;
    if (div_two_pi_i) {
        out.value = T(out.value / (2.0 * kPi * kI));
        out.abs_err_estimate /= 2.0 * kPi;
    }
    return out;
}

namespace detail {

template <class F, class T>
T rect_edges_gl(F&& f, const Rectangle& r, int points_per_edge, const T& proto) {
    const Complex corners[5] = {{r.re_min, r.im_min},
                                {r.re_max, r.im_min},
                                {r.re_max, r.im_max},
                                {r.re_min, r.im_max},
                                {r.re_min, r.im_min}};
    const int panels = std::max(1, points_per_edge / 16);
    T acc;
    value_zero(acc, proto);
    for (int e = 0; e < 4; ++e) {
        const Complex z0 = corners[e], z1 = corners[e + 1];
        const Complex d = z1 - z0;
        auto along = [&](double s) -> T { return T(f(z0 + s * d) * d); };
        acc += composite_gl(along, 0.0, 1.0, panels, proto);
    }
    return acc;
}

}  // namespace detail

// counterclockwise rectangle contour, fixed Gauss points per edge
template <class F>
auto contour_rectangle(F&& f, const Rectangle& r, int points_per_edge = 32,
                       bool div_two_pi_i = false)
    -> QuadResult<std::decay_t<decltype(f(Complex{}))>> {
    using T = std::decay_t<decltype(f(Complex{}))>;
    if (points_per_edge < 8) throw std::invalid_argument("node count must be at least 8");
    if (!r.valid()) throw std::invalid_argument("degenerate rectangle");

    T proto = f(Complex(r.re_min, r.im_min));
    T coarse = detail::rect_edges_gl(f, r, points_per_edge / 2 < 8 ? 8 : points_per_edge / 2,
                                     proto);
    T fine = detail::rect_edges_gl(f, r, points_per_edge, proto);
    QuadResult<T> out;
    out.value = fine;
    out.abs_err_estimate = detail::value_norm(T(fine - coarse));
    out.panels_used = points_per_edge;
    if (div_two_pi_i) {
        out.value = T(out.value / (2.0 * kPi * kI));
        out.abs_err_estimate /= 2.0 * kPi;
    }
    return out;
}

// winding number of g around a rectangle. Default route: adaptive argument
// tracking of g along the boundary, bisecting until the phase turns by at most
// pi/2 per step, so near-contour zeros cost log(edge/distance) samples. With
// `logderiv` (= g'/g) supplied, the count is integrated from it instead by
// capped panel doubling. Both routes throw SearchError when a zero sits on or
// unresolvably close to the contour.
int winding_number(const std::function<Complex(Complex)>& g, const Rectangle& rect,
                   const std::function<Complex(Complex)>& logderiv = nullptr,
                   const QuadOptions& opts = {});

}  // namespace resokit
