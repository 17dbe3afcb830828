#include "resokit/scattering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace resokit {

namespace {

// solve X * A = B, i.e. X = B A^{-1}
CMatrix right_solve(const CMatrix& b, const CMatrix& a) {
    Eigen::PartialPivLU<CMatrix> lu(a.transpose());
    return lu.solve(b.transpose()).transpose();
}

void require_nonsingular(const Eigen::PartialPivLU<CMatrix>& lu, const CMatrix& a,
                         const char* what) {
    const double det = std::abs(lu.determinant());
    const double scale = std::max(1.0, std::pow(a.norm(), double(a.rows())));
    if (!(det > 1e-14 * scale)) throw KitError(what);
}

}  // namespace

const CMatrix& SpectralDensity::operator()(double lambda) const {
    const auto key = std::bit_cast<std::uint64_t>(lambda);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    const Complex z(lambda, 0.0);
    const CMatrix lp = eval_L(model_, z, Branch::plus_boundary, opts_).matrix;
    const CMatrix lm = lp.adjoint();  // boundary value from below is the adjoint
    const CMatrix b = model_.B(z);

    Eigen::PartialPivLU<CMatrix> lu(lp);
    require_nonsingular(lu, lp, "Livsic matrix singular on the axis");
    const CMatrix d = right_solve(lu.solve(b), lm);
    return cache_.emplace(key, d).first->second;
}

double SpectralDensity::rho(double lambda, const CVector& e) const {
    return e.dot((*this)(lambda) * e).real();
}

CMatrix s_matrix_K(const ModelSpec& m, double lambda, const QuadOptions& opts) {
    const Complex z(lambda, 0.0);
    const CMatrix lp = eval_L(m, z, Branch::plus_boundary, opts).matrix;
    Eigen::PartialPivLU<CMatrix> lu(lp);
    require_nonsingular(lu, lp, "Livsic matrix singular on the axis");
    const CMatrix mm = m.M(z);
    return CMatrix::Identity(m.n, m.n) -
           2.0 * kPi * kI * (mm * lu.solve(CMatrix(mm.adjoint())));
}

CMatrix s_matrix_E(const ModelSpec& m, Complex z, const QuadOptions& opts) {
    CMatrix lp, lm;
    if (z.imag() == 0.0) {
        lp = eval_L(m, z, Branch::plus_boundary, opts).matrix;
        lm = lp.adjoint();
    } else if (z.imag() < 0.0) {
        lp = eval_L(m, z, Branch::plus_continued, opts).matrix;
        lm = eval_L(m, z, Branch::minus_lower, opts).matrix;
    } else {
        throw std::invalid_argument("s_matrix_E expects z on the axis or below it");
    }
    Eigen::PartialPivLU<CMatrix> lu(lp);
    require_nonsingular(lu, lp, "scattering matrix evaluated at a resonance");
    return lu.solve(lm);
}

CMatrix residue_SE(const ModelSpec& m, const Resonance& res, double radius, int nodes,
                   const QuadOptions& opts) {
    if (res.det_order != 1)
        throw std::invalid_argument("residue extraction needs a simple resonance");
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    if (res.zeta.imag() + radius >= 0.0)
        throw std::invalid_argument("residue circle crosses the real axis");
    auto f = [&](Complex w) { return s_matrix_E(m, w, opts); };
    return contour_circle(f, Circle{res.zeta, radius}, nodes, true).value;
}

SubspaceMatch residue_kernel_match(const ModelSpec& m, const Resonance& res,
                                   const QuadOptions& opts) {
    if (res.kernel_basis.cols() == 0)
        throw std::invalid_argument("resonance carries no kernel basis");
    const double radius = std::min(0.45 * std::abs(res.zeta.imag()), 0.02);
    const CMatrix r = residue_SE(m, res, radius, 128, opts);

    Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    SubspaceMatch out;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-8 * sv[0]) ++out.residue_rank;
    out.rank_matches = (out.residue_rank == res.q);

    const CMatrix u = svd.matrixU().leftCols(out.residue_rank);
    Eigen::JacobiSVD<CMatrix> overlap(CMatrix(u.adjoint() * res.kernel_basis));
    // largest principal angle between the two column spaces
    const double c = std::clamp(overlap.singularValues().minCoeff(), 0.0, 1.0);
    out.principal_angle = std::acos(c);
    out.pass = out.rank_matches && out.principal_angle < 1e-6;
    return out;
}

BWFit breit_wigner_fit(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 8) throw std::invalid_argument("need at least 8 samples");
    std::vector<std::pair<double, double>> pts = samples;
    std::sort(pts.begin(), pts.end());
    const int n = static_cast<int>(pts.size());

    int imax = 0;
    double ymin = pts[0].second, ymax = pts[0].second;
    for (int i = 0; i < n; ++i) {
        ymin = std::min(ymin, pts[i].second);
        if (pts[i].second > ymax) {
            ymax = pts[i].second;
            imax = i;
        }
    }
    if (!(ymax - ymin > 1e-12 * std::max(1.0, std::abs(ymax))))
        throw KitError("flat data admits no line-shape fit");

    // full width at half maximum by linear interpolation outwards from the peak
    const double half = 0.5 * ymax;
    double left = pts.front().first, right = pts.back().first;
    for (int i = imax; i > 0; --i) {
        if (pts[i - 1].second <= half) {
            const double t = (half - pts[i - 1].second) / (pts[i].second - pts[i - 1].second);
            left = pts[i - 1].first + t * (pts[i].first - pts[i - 1].first);
            break;
        }
    }
    for (int i = imax; i + 1 < n; ++i) {
        if (pts[i + 1].second <= half) {
            const double t = (pts[i].second - half) / (pts[i].second - pts[i + 1].second);
            right = pts[i].first + t * (pts[i + 1].first - pts[i].first);
            break;
        }
    }
    double gamma = right - left;
    if (!(gamma > 0.0)) gamma = 0.25 * (pts.back().first - pts.front().first);

    Eigen::Vector3d p(ymax * 0.25 * gamma * gamma, pts[imax].first, gamma);

    auto cost_at = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) -> double {
        for (int i = 0; i < n; ++i) {
            const double dx = pts[i].first - q[1];
            const double d = dx * dx + 0.25 * q[2] * q[2];
            r[i] = q[0] / d - pts[i].second;
        }
        return r.squaredNorm();
    };

    Eigen::VectorXd r(n), rt(n);
    double cost = cost_at(p, r);
    double mu = 1e-3;
    bool converged = false;

    for (int iter = 0; iter < 200 && !converged; ++iter) {
        Eigen::MatrixXd jac(n, 3);
        for (int i = 0; i < n; ++i) {
            const double dx = pts[i].first - p[1];
            const double d = dx * dx + 0.25 * p[2] * p[2];
            jac(i, 0) = 1.0 / d;
            jac(i, 1) = 2.0 * p[0] * dx / (d * d);
            jac(i, 2) = -0.5 * p[0] * p[2] / (d * d);
        }
        const Eigen::Matrix3d h = jac.transpose() * jac;
        const Eigen::Vector3d g = jac.transpose() * r;

        bool stepped = false;
        while (mu < 1e12) {
            const Eigen::Vector3d delta =
                (h + mu * Eigen::Matrix3d::Identity()).ldlt().solve(-g);
            const Eigen::Vector3d trial = p + delta;
            const double trial_cost = cost_at(trial, rt);
            if (trial_cost < cost) {
                p = trial;
                r = rt;
                cost = trial_cost;
                mu = std::max(mu / 10.0, 1e-14);
                if (delta.norm() < 1e-10) converged = true;
                stepped = true;
                break;
            }
            mu *= 10.0;
        }
        if (!stepped) break;  // damping exhausted, no downhill direction left
    }

    BWFit out;
    out.c = p[0];
    out.lambda0_fit = p[1];
    out.gamma_fit = std::abs(p[2]);
    out.rms_residual = std::sqrt(cost / n);
    out.converged = converged;
    return out;
}

}  // namespace resokit
