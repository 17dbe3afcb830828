#include "resokit/resonance.hpp"

#include <algorithm>
#include <cmath>

namespace resokit {

namespace {

Complex logderiv_det(const ModelSpec& m, Complex z, const QuadOptions& opts) {
    const auto L = eval_L(m, z, Branch::plus_continued, opts);
    const CMatrix Lp = eval_L_derivative(m, z, Branch::plus_continued, opts);
    Eigen::PartialPivLU<CMatrix> lu(L.matrix);
    return lu.solve(Lp).trace();
}

int winding_of(const ModelSpec& m, const Rectangle& rect, const QuadOptions& opts) {
    // argument tracking on the determinant: one L evaluation per sample, and
    // robust against zeros hugging the cell boundary (the jitter path)
    auto det = [&](Complex z) -> Complex {
        const auto L = eval_L(m, z, Branch::plus_continued, opts);
        return Eigen::PartialPivLU<CMatrix>(L.matrix).determinant();
    };
    return winding_number(det, rect, nullptr, opts);
}

// winding with boundary-jitter retries; grows the rectangle by k*1e-6 per retry
int winding_jittered(const ModelSpec& m, Rectangle rect, const QuadOptions& opts,
                     int& jitter_count) {
    for (int attempt = 0;; ++attempt) {
        try {
            return winding_of(m, rect, opts);
        } catch (const SearchError&) {
            if (attempt >= 5) throw SearchError("boundary zero after 5 jitters");
            ++jitter_count;
            const double d = 1e-6 * (attempt + 1);
            rect.re_min -= d;
            rect.re_max += d;
            rect.im_min -= d;
            rect.im_max = std::min(rect.im_max + d, -1e-12);
        }
    }
}

struct Cell {
    Rectangle rect;
    int winding;
    int depth;
};

// zero order at an already-polished point, by a tiny log-derivative circle
int order_at(const ModelSpec& m, Complex z, const QuadOptions& opts) {
    const double radius = std::min(1e-6, 0.5 * std::abs(z.imag()));
    auto ld = [&](Complex w) -> Complex { return logderiv_det(m, w, opts); };
    const auto res = contour_circle(ld, Circle{z, radius}, 64, true);
    return static_cast<int>(std::lround(res.value.real()));
}

}  // namespace

Complex refine_newton(const ModelSpec& m, Complex z0, double tol, const QuadOptions& opts) {
    Complex z = z0;
    Complex last_step = 0.0;
    for (int it = 0; it < 50; ++it) {
        Complex ld;
        try {
            ld = logderiv_det(m, z, opts);
        } catch (const std::invalid_argument&) {
            throw SearchError("newton left the continuation region");
        }
        Complex step = -1.0 / ld;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            step = -last_step / 2.0;  // singular mid-iterate: back off
            if (step == Complex(0.0, 0.0)) throw SearchError("newton hit a singular iterate");
        }
        z += step;
        last_step = step;
        if (std::abs(step) < tol) return z;
    }
    throw SearchError("newton did not converge");
}

CMatrix kernel(const ModelSpec& m, Complex zeta, double rel_tol, const QuadOptions& opts) {
    const auto L = eval_L(m, zeta, Branch::plus_continued, opts);
    Eigen::JacobiSVD<CMatrix> svd(L.matrix, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // anchor the cutoff at the natural unit of L (~identity slope) so the
    // relative test stays meaningful when the whole matrix is near zero (n=1)
    const double cut = rel_tol * std::max(sv(0), 1.0);
    int q = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < cut) ++q;
    if (q == 0) throw KitError("not a resonance at given tolerance");
    return svd.matrixV().rightCols(q);
}

LocateResult locate_resonances(const ModelSpec& m, const Rectangle& rect,
                               const LocateOptions& opts) {
    if (!rect.valid()) throw std::invalid_argument("degenerate rectangle");
    if (rect.im_max >= 0.0)
        throw std::invalid_argument("search rectangle must lie below the axis");
    if (!m.region.contains(Complex(rect.re_min, rect.im_min)) ||
        !m.region.contains(Complex(rect.re_max, rect.im_max)))
        throw std::invalid_argument("search rectangle must lie inside the model region");

    LocateResult out;
    const int w0 = winding_jittered(m, rect, opts.quad, out.jitter_retries);
    if (w0 == 0) return out;

    std::vector<Cell> stack{{rect, w0, 0}};
    std::vector<std::pair<Complex, int>> candidates;  // refined zero + cell winding

    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();

        if (c.rect.diameter() < opts.isolation_diameter) {
            bool settled = false;
            try {
                const Complex z = refine_newton(m, c.rect.center(), opts.newton_tol, opts.quad);
                // a cell of winding w may hold one zero of order w or several
                // distinct zeros; only accept when the polished point carries
                // the whole count
                if (c.winding == 1 || order_at(m, z, opts.quad) == c.winding) {
                    candidates.emplace_back(z, c.winding);
                    settled = true;
                }
            } catch (const SearchError&) {
            }
            if (settled) continue;
            if (c.depth >= opts.max_depth) {
                out.complete = false;
                ++out.exhausted_cells;
                candidates.emplace_back(c.rect.center(), c.winding);
                continue;
            }
        } else if (c.depth >= opts.max_depth) {
            out.complete = false;
            ++out.exhausted_cells;
            candidates.emplace_back(c.rect.center(), c.winding);
            continue;
        }

        const double rm = 0.5 * (c.rect.re_min + c.rect.re_max);
        const double im = 0.5 * (c.rect.im_min + c.rect.im_max);
        const Rectangle quads[4] = {
            {c.rect.re_min, rm, c.rect.im_min, im},
            {rm, c.rect.re_max, c.rect.im_min, im},
            {c.rect.re_min, rm, im, c.rect.im_max},
            {rm, c.rect.re_max, im, c.rect.im_max},
        };
        for (const auto& qr : quads) {
            const int w = winding_jittered(m, qr, opts.quad, out.jitter_retries);
            if (w > 0) stack.push_back({qr, w, c.depth + 1});
        }
    }

    // deduplicate and attach kernels
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    for (const auto& [z, order] : candidates) {
        if (!out.found.empty() && std::abs(out.found.back().zeta - z) < opts.dedup_radius) {
            out.found.back().det_order += order;
            continue;
        }
        Resonance r;
        r.zeta = z;
        r.det_order = order;
        try {
            r.kernel_basis = kernel(m, z, opts.kernel_rel_tol, opts.quad);
            r.q = static_cast<int>(r.kernel_basis.cols());
            const auto L = eval_L(m, z, Branch::plus_continued, opts.quad);
            double worst = 0.0;
            for (int c = 0; c < r.q; ++c)
                worst = std::max(worst, (L.matrix * r.kernel_basis.col(c)).norm());
            r.residual = worst;
        } catch (const KitError&) {
            r.q = 0;  // exhausted cell whose center is not an actual zero
        }
        out.found.push_back(std::move(r));
    }
    return out;
}

}  // namespace resokit
