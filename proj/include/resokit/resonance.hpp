#pragma once

// Zero search for det L on the continued branch: argument-principle counting,
// quadrisection isolation, Newton polishing, kernel extraction.

#include <vector>

#include "resokit/livsic.hpp"
#include "resokit/model.hpp"
#include "resokit/quad.hpp"

namespace resokit {

struct Resonance {
    Complex zeta;
    int det_order = 1;      // order of the det zero (winding of the isolating cell)
    CMatrix kernel_basis;   // n x q, orthonormal columns
    int q = 0;              // geometric multiplicity
    double residual = 0.0;  // max ||L(zeta) v|| over the basis
};

struct LocateOptions {
    int max_depth = 24;
    double isolation_diameter = 0.1;
    double newton_tol = 1e-12;
    double dedup_radius = 1e-9;
    double kernel_rel_tol = 1e-8;
    QuadOptions quad{};
};

struct LocateResult {
    std::vector<Resonance> found;   // sorted by (Re, Im)
    bool complete = true;           // false when max_depth exhausted somewhere
    int exhausted_cells = 0;
    int jitter_retries = 0;         // boundary-through-zero retries that occurred
};

LocateResult locate_resonances(const ModelSpec& m, const Rectangle& rect,
                               const LocateOptions& opts = {});

// Newton on det via the log-derivative trace; throws SearchError on
// non-convergence
Complex refine_newton(const ModelSpec& m, Complex z0, double tol = 1e-12,
                      const QuadOptions& opts = {});

// orthonormal kernel basis of L(zeta) on the continued branch (SVD cutoff
// rel_tol * sigma_max); throws KitError when the kernel is empty
CMatrix kernel(const ModelSpec& m, Complex zeta, double rel_tol = 1e-8,
               const QuadOptions& opts = {});

}  // namespace resokit
