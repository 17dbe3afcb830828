#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "resokit/livsic.hpp"
#include "resokit/model.hpp"
#include "resokit/resonance.hpp"
#include "resokit/types.hpp"

namespace resokit {

// on-axis spectral density D(lambda) = L+^{-1} B L-^{-1}, with a value cache
// keyed by the bit pattern of lambda (grid sweeps revisit points)
class SpectralDensity {
  public:
    explicit SpectralDensity(const ModelSpec& m, QuadOptions opts = {})
        : model_(m), opts_(opts) {}

    const CMatrix& operator()(double lambda) const;

    // (e, D(lambda) e), antilinear in the first slot; real up to quadrature
    double rho(double lambda, const CVector& e) const;

    const ModelSpec& model() const { return model_; }
    std::size_t cache_size() const { return cache_.size(); }

  private:
    ModelSpec model_;
    QuadOptions opts_;
    mutable std::unordered_map<std::uint64_t, CMatrix> cache_;
};

// channel-space scattering matrix 1 - 2 pi i M L+^{-1} M^T at real lambda
CMatrix s_matrix_K(const ModelSpec& m, double lambda, const QuadOptions& opts = {});

// spectral-representation scattering matrix L+^{-1} L-.
// on the axis both factors use their boundary values; below the axis L+ is
// taken on its continued branch while L- keeps its defining integral, so the
// product extends meromorphically across the cut
CMatrix s_matrix_E(const ModelSpec& m, Complex z, const QuadOptions& opts = {});

// (1/2 pi i) contour integral of s_matrix_E around a simple resonance
CMatrix residue_SE(const ModelSpec& m, const Resonance& res, double radius,
                   int nodes, const QuadOptions& opts = {});

struct SubspaceMatch {
    double principal_angle = 0.0;  // largest angle between the two subspaces
    int residue_rank = 0;
    bool rank_matches = false;  // residue rank equals the kernel dimension
    bool pass = false;
};

// compare the column space of the S-matrix residue with the kernel basis of
// the Livsic matrix at the same resonance
SubspaceMatch residue_kernel_match(const ModelSpec& m, const Resonance& res,
                                   const QuadOptions& opts = {});

struct BWFit {
    double c = 0.0;            // amplitude
    double lambda0_fit = 0.0;  // line center
    double gamma_fit = 0.0;    // full width
    double rms_residual = 0.0;
    bool converged = false;
};

// least-squares fit of y ~ c / ((lambda - lambda0)^2 + (gamma/2)^2)
BWFit breit_wigner_fit(const std::vector<std::pair<double, double>>& samples);

}  // namespace resokit
