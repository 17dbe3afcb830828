#include "resokit/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "resokit/scattering.hpp"

namespace resokit {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// iterative radix-2 transform, forward sign e^{-2 pi i jk/n}
void fft_inplace(std::vector<Complex>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / len * (inverse ? 1.0 : -1.0);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& v : a) v /= static_cast<double>(n);
    }
}

}  // namespace

HardyGrid::HardyGrid(double half_width_in, int n_in)
    : half_width(half_width_in), n(n_in) {
    if (!(half_width > 0.0)) throw std::invalid_argument("window must be positive");
    if (!is_pow2(n) || n < 8)
        throw std::invalid_argument("sample count must be a power of two (>= 8)");
}

CMatrix HardyGrid::sample(const std::function<CVector(double)>& f, int dim) const {
    CMatrix out(n, dim);
    for (int j = 0; j < n; ++j) out.row(j) = f(lambda_at(j)).transpose();
    return out;
}

double HardyGrid::norm(const CMatrix& samples) const {
    return std::sqrt(step()) * samples.norm();
}

double HardyGrid::edge_fraction(const CMatrix& samples, double band) const {
    const int edge = std::max(1, static_cast<int>(band * n));
    const double total = samples.squaredNorm();
    if (total == 0.0) return 0.0;
    const double outer =
        samples.topRows(edge).squaredNorm() + samples.bottomRows(edge).squaredNorm();
    return std::sqrt(outer / total);
}

CMatrix hardy_project(const HardyGrid& g, const CMatrix& f) {
    if (f.rows() != g.n) throw std::invalid_argument("samples do not match the grid");
    CMatrix out(f.rows(), f.cols());
    std::vector<Complex> col(g.n);
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
        for (int j = 0; j < g.n; ++j) col[j] = f(j, c);
        fft_inplace(col, false);
        // bins n/2..n-1 alias to negative times under the stated convention
        std::fill(col.begin() + g.n / 2, col.end(), Complex(0.0, 0.0));
        fft_inplace(col, true);
        for (int j = 0; j < g.n; ++j) out(j, c) = col[j];
    }
    return out;
}

CMatrix truncated_evolution(const HardyGrid& g, const CMatrix& f, double t) {
    if (t < 0.0) throw std::invalid_argument("negative time is outside the semigroup");
    if (f.rows() != g.n) throw std::invalid_argument("samples do not match the grid");
    CMatrix shifted(f.rows(), f.cols());
    for (int j = 0; j < g.n; ++j) {
        const Complex phase = std::exp(Complex(0.0, -g.lambda_at(j) * t));
        shifted.row(j) = phase * f.row(j);
    }
    return hardy_project(g, shifted);
}

double semigroup_defect(const HardyGrid& g, const CMatrix& f, double t1, double t2) {
    if (t1 < 0.0 || t2 < 0.0)
        throw std::invalid_argument("negative time is outside the semigroup");
    const CMatrix once = truncated_evolution(g, f, t1 + t2);
    const CMatrix twice = truncated_evolution(g, truncated_evolution(g, f, t2), t1);
    const double base = g.norm(f);
    if (base == 0.0) return 0.0;
    return g.norm(CMatrix(once - twice)) / base;
}

double evolution_eigen_defect(const HardyGrid& g, Complex zeta, const CVector& k,
                              double t) {
    if (!(zeta.imag() < 0.0))
        throw std::invalid_argument("pole must lie below the axis");
    const int dim = static_cast<int>(k.size());
    const CMatrix f =
        g.sample([&](double lam) { return CVector(k / (lam - zeta)); }, dim);
    const CMatrix evolved = truncated_evolution(g, f, t);
    const Complex phase = std::exp(Complex(0.0, -1.0) * zeta * t);
    return g.norm(CMatrix(evolved - phase * f)) / g.norm(f);
}

namespace {

struct FixedGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// composite 16-point panels with extra density inside the level bands, where
// the density carries resonance peaks much narrower than the Nyquist panel
FixedGrid build_grid(const ModelSpec& m, double lo, double hi, double tmax) {
    const double nyquist = kPi / std::max(1.0, tmax);
    const double coarse = std::min(nyquist, 0.25);
    const double fine = std::min(nyquist, 0.005);

    std::vector<std::pair<double, double>> bands;
    for (Eigen::Index i = 0; i < m.level_eigenvalues().size(); ++i) {
        const double ev = m.level_eigenvalues()[i];
        bands.emplace_back(ev - 0.75, ev + 0.75);
    }
    std::sort(bands.begin(), bands.end());

    auto in_band = [&](double x) {
        for (const auto& b : bands)
            if (x >= b.first && x <= b.second) return true;
        return false;
    };

    FixedGrid g;
    const auto& xs = detail::gl_nodes16();
    const auto& ws = detail::gl_weights16();
    double a = lo;
    while (a < hi) {
        const double width = in_band(a) ? fine : coarse;
        const double b = std::min(a + width, hi);
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (int i = 0; i < 16; ++i) {
            g.nodes.push_back(mid + half * xs[i]);
            g.weights.push_back(half * ws[i]);
        }
        a = b;
    }
    return g;
}

}  // namespace

std::vector<SurvivalPoint> survival_amplitude(const ModelSpec& m, const CVector& e0,
                                              const std::vector<double>& times,
                                              const QuadOptions& opts) {
    if (e0.size() != m.n) throw std::invalid_argument("dimension mismatch");
    double tmax = 1.0;
    for (double t : times) {
        if (t < 0.0) throw std::invalid_argument("negative time is outside the semigroup");
        tmax = std::max(tmax, t);
    }
    const double w = m.envelope_halfwidth();
    SpectralDensity dens(m, opts);

    const FixedGrid full = build_grid(m, -w, w, tmax);
    const FixedGrid half = build_grid(m, -w, w, 0.5 * tmax);
    std::vector<double> rho_full(full.nodes.size()), rho_half(half.nodes.size());
    for (std::size_t i = 0; i < full.nodes.size(); ++i)
        rho_full[i] = dens.rho(full.nodes[i], e0);
    for (std::size_t i = 0; i < half.nodes.size(); ++i)
        rho_half[i] = dens.rho(half.nodes[i], e0);

    auto eval = [](const FixedGrid& g, const std::vector<double>& rho, double t) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            acc += g.weights[i] * rho[i] * std::exp(Complex(0.0, -g.nodes[i] * t));
        return acc;
    };

    std::vector<SurvivalPoint> out;
    out.reserve(times.size());
    for (double t : times) {
        SurvivalPoint p;
        p.t = t;
        p.a = eval(full, rho_full, t);
        const Complex coarse = eval(half, rho_half, t);
        p.err = std::abs(p.a - coarse);
        p.converged = p.err <= std::max(1e-8, 1e-6 * std::abs(p.a));
        out.push_back(p);
    }
    return out;
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<Complex>& amps,
                   double t_lo, double t_hi) {
    if (times.size() != amps.size())
        throw std::invalid_argument("times and amplitudes differ in length");
    std::vector<std::pair<double, double>> pts;  // (t, log|A|)
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        const double mag = std::abs(amps[i]);
        if (mag <= 1e-12) throw KitError("amplitude underflow in window");
        pts.emplace_back(times[i], std::log(mag));
    }
    if (pts.size() < 4) throw KitError("fewer than 4 usable points");

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const auto& [t, y] : pts) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double nn = static_cast<double>(pts.size());
    const double denom = nn * stt - st * st;
    const double slope = (nn * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / nn;

    DecayFit fit;
    fit.gamma = -2.0 * slope;
    fit.amplitude = std::exp(intercept);
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.points_used = static_cast<int>(pts.size());
    double ss = 0.0;
    for (const auto& [t, y] : pts) {
        const double r = y - (intercept + slope * t);
        ss += r * r;
    }
    fit.rms_log_residual = std::sqrt(ss / nn);
    return fit;
}

}  // namespace resokit
