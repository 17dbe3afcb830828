#include "resokit/quad.hpp"

#include <cmath>
#include <mutex>

namespace resokit {
namespace detail {

namespace {

// Legendre P_16 nodes by Newton iteration on the recurrence, seeded with the
// Chebyshev-based asymptotic guess
void build_gl16(std::array<double, 16>& nodes, std::array<double, 16>& weights) {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

std::array<double, 16> g_nodes;
std::array<double, 16> g_weights;
std::once_flag g_once;

void init_gl16() {
    std::call_once(g_once, [] { build_gl16(g_nodes, g_weights); });
}

}  // namespace

const std::array<double, 16>& gl_nodes16() {
    init_gl16();
    return g_nodes;
}

const std::array<double, 16>& gl_weights16() {
    init_gl16();
    return g_weights;
}

}  // namespace detail

namespace {

// winding by quadrature of a supplied g'/g, panel doubling with a hard cap:
// only sensible when the log-derivative is cheap and the zeros are well inside
int winding_by_logderiv(const std::function<Complex(Complex)>& logderiv,
                        const Rectangle& rect, const QuadOptions& opts) {
    const Complex corners[5] = {{rect.re_min, rect.im_min},
                                {rect.re_max, rect.im_min},
                                {rect.re_max, rect.im_max},
                                {rect.re_min, rect.im_max},
                                {rect.re_min, rect.im_min}};
    auto boundary_sum = [&](int panels_per_edge) -> Complex {
        Complex acc = 0.0;
        for (int e = 0; e < 4; ++e) {
            const Complex z0 = corners[e], d = corners[e + 1] - corners[e];
            auto f = [&](double s) -> Complex { return logderiv(z0 + s * d) * d; };
            acc += detail::composite_gl(f, 0.0, 1.0, panels_per_edge, Complex{});
        }
        return acc;
    };

    int panels = 2;
    Complex prev = boundary_sum(panels);
    const int cap = std::min(opts.max_panels, 1024);
    while (panels < cap) {
        panels *= 2;
        const Complex cur = boundary_sum(panels);
        if (std::abs(cur - prev) < 0.02) {
            const double w = (cur / (2.0 * kPi * kI)).real();
            const double nearest = std::round(w);
            if (std::abs(w - nearest) > 0.25) throw SearchError("zero too close to contour");
            return static_cast<int>(nearest);
        }
        prev = cur;
    }
    throw SearchError("zero too close to contour");
}

}  // namespace

int winding_number(const std::function<Complex(Complex)>& g, const Rectangle& rect,
                   const std::function<Complex(Complex)>& logderiv, const QuadOptions& opts) {
    if (!rect.valid()) throw std::invalid_argument("degenerate rectangle");
    if (logderiv) return winding_by_logderiv(logderiv, rect, opts);

    // argument tracking: bisect every boundary segment until the phase of g
    // turns by at most pi/2 across it, so a zero at distance d from the
    // contour costs O(log(edge/d)) samples instead of O(edge/d) panels
    long evals = 0;
    auto sample = [&](Complex z) -> Complex {
        if (++evals > 100000) throw SearchError("zero too close to contour");
        const Complex v = g(z);
        if (!(std::abs(v) > 1e-13)) throw SearchError("zero too close to contour");
        return v;
    };

    const Complex corners[5] = {{rect.re_min, rect.im_min},
                                {rect.re_max, rect.im_min},
                                {rect.re_max, rect.im_max},
                                {rect.re_min, rect.im_max},
                                {rect.re_min, rect.im_min}};

    struct Segment {
        double t0, t1;
        Complex v0, v1;
        int depth;
    };

    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const Complex z0 = corners[e], d = corners[e + 1] - corners[e];
        constexpr int kInitial = 8;
        Complex vals[kInitial + 1];
        for (int k = 0; k <= kInitial; ++k)
            vals[k] = sample(z0 + (static_cast<double>(k) / kInitial) * d);

        std::vector<Segment> stack;
        for (int k = 0; k < kInitial; ++k)
            stack.push_back({static_cast<double>(k) / kInitial,
                             static_cast<double>(k + 1) / kInitial, vals[k], vals[k + 1], 0});
        while (!stack.empty()) {
            const Segment s = stack.back();
            stack.pop_back();
            const double dphi = std::arg(s.v1 / s.v0);
            if (std::abs(dphi) <= 0.5 * kPi) {
                total += dphi;
                continue;
            }
            if (s.depth >= 48) throw SearchError("zero too close to contour");
            const double tm = 0.5 * (s.t0 + s.t1);
            const Complex vm = sample(z0 + tm * d);
            stack.push_back({s.t0, tm, s.v0, vm, s.depth + 1});
            stack.push_back({tm, s.t1, vm, s.v1, s.depth + 1});
        }
    }

    const double w = total / (2.0 * kPi);
    const double nearest = std::round(w);
    if (std::abs(w - nearest) > 0.25) throw SearchError("zero too close to contour");
    return static_cast<int>(nearest);
}

}  // namespace resokit
