#pragma once

#include <functional>
#include <vector>

#include "resokit/model.hpp"
#include "resokit/quad.hpp"
#include "resokit/types.hpp"

namespace resokit {

// uniform spectral grid on [-half_width, half_width) with a power-of-two
// sample count; sample matrices hold one channel per column.
// Fourier convention: f(lambda) = integral_0^inf g(t) e^{i lambda t} dt, so
// upper-Hardy membership means time support on [0, inf) and the projection
// zeroes the negative-time bins
struct HardyGrid {
    double half_width = 64.0;
    int n = 1 << 14;

    HardyGrid() = default;
    HardyGrid(double half_width_in, int n_in);

    double step() const { return 2.0 * half_width / n; }
    double lambda_at(int j) const { return -half_width + j * step(); }

    CMatrix sample(const std::function<CVector(double)>& f, int dim) const;
    double norm(const CMatrix& samples) const;
    // norm fraction carried by the outer band of the window (truncation gauge)
    double edge_fraction(const CMatrix& samples, double band = 0.05) const;
};

CMatrix hardy_project(const HardyGrid& g, const CMatrix& f);

// multiply by e^{-i lambda t}, then project back; t >= 0 only
CMatrix truncated_evolution(const HardyGrid& g, const CMatrix& f, double t);

// || Z(t1+t2) f - Z(t1) Z(t2) f || / || f ||
double semigroup_defect(const HardyGrid& g, const CMatrix& f, double t1, double t2);

// || Z(t) f - e^{-i zeta t} f || / || f || for the pole function f = k/(lambda - zeta)
double evolution_eigen_defect(const HardyGrid& g, Complex zeta, const CVector& k, double t);

struct SurvivalPoint {
    double t = 0.0;
    Complex a;
    double err = 0.0;
    bool converged = true;
};

// A(t) = integral e^{-i lambda t} (e0, D(lambda) e0) d lambda on a fixed grid
// dense enough for the largest requested time; per-point error from a
// half-density pass
std::vector<SurvivalPoint> survival_amplitude(const ModelSpec& m, const CVector& e0,
                                              const std::vector<double>& times,
                                              const QuadOptions& opts = {});

struct DecayFit {
    double amplitude = 0.0;  // |A(t)| ~ amplitude * e^{-gamma t / 2}
    double gamma = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double rms_log_residual = 0.0;
    int points_used = 0;
};

DecayFit decay_fit(const std::vector<double>& times, const std::vector<Complex>& amps,
                   double t_lo = 5.0, double t_hi = 60.0);

}  // namespace resokit
