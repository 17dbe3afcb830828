#pragma once

// Model definition: level matrix, polynomial-times-Gaussian form factor,
// continuation region, config parsing.

#include <cstdint>
#include <string>
#include <vector>

#include "resokit/quad.hpp"
#include "resokit/types.hpp"

namespace resokit {

// one entry contribution p(z-c) * exp(-width*(z-c)^2/2) at (row, col)
struct FormFactorTerm {
    int row = 0;
    int col = 0;
    std::vector<double> coeffs;  // c0..cd of p
    double width = 1.0;
    double center = 0.0;
};

class ModelSpec {
  public:
    int n = 0;
    RMatrix lambda0;  // real symmetric
    std::vector<FormFactorTerm> terms;
    Rectangle region;

    const RVector& level_eigenvalues() const { return eigs_; }

    CMatrix M(Complex z) const;        // entire form factor
    CMatrix M_prime(Complex z) const;  // dM/dz
    CMatrix B(Complex z) const;        // M(z)^T M(z)
    CMatrix B_prime(Complex z) const;  // dB/dz

    // half-width W such that every form-factor entry is below ~1e-18 of its
    // peak scale outside [-W, W]
    double envelope_halfwidth() const;

    // spectrum of the level matrix padded by three Gaussian sigmas (axis scans)
    std::pair<double, double> scan_range() const;

    std::string canonical_json() const;
    std::string hash_hex() const;  // FNV-1a of the canonical form

    void finalize();  // validate invariants, fill defaults, cache eigenvalues

  private:
    RVector eigs_;
};

ModelSpec parse_model(const std::string& config_text);
ModelSpec load_model_file(const std::string& path);

inline CMatrix eval_M(const ModelSpec& m, Complex z) { return m.M(z); }
inline CMatrix eval_B(const ModelSpec& m, Complex z) { return m.B(z); }

}  // namespace resokit
