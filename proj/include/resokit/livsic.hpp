#pragma once

// The central matrix-valued function L(z) = (z - Lambda0) - Cauchy(B)(z) on
// both half-planes, its boundary values, the continuation of the plus branch
// into the lower half-plane, derivatives, and the axis-clearance scan.

#include "resokit/model.hpp"
#include "resokit/quad.hpp"
#include "resokit/types.hpp"

namespace resokit {

enum class Branch { plus_upper, plus_boundary, plus_continued, minus_lower, minus_boundary };

const char* branch_name(Branch b);

struct LivsicValue {
    Complex z;
    Branch branch = Branch::plus_upper;
    CMatrix matrix;
    double err = 0.0;
};

LivsicValue eval_L(const ModelSpec& m, Complex z, Branch branch, const QuadOptions& opts = {});

// d/dz of the plus branch; valid for plus_upper and plus_continued
CMatrix eval_L_derivative(const ModelSpec& m, Complex z, Branch branch,
                          const QuadOptions& opts = {});

struct AxisClearance {
    double min_abs_det = 0.0;
    double argmin_lambda = 0.0;
    bool pass = false;
};

// scan |det L(lambda + i0)| over the padded level spectrum; pass iff the
// minimum stays above 1e-8 (no spectrum embedded on the axis)
AxisClearance check_assumption2(const ModelSpec& m, double step = 1e-2,
                                const QuadOptions& opts = {});

}  // namespace resokit
