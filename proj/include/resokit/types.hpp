#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace resokit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

struct KitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// malformed config text (unreadable / not valid JSON)
struct ParseError : KitError {
    using KitError::KitError;
};

// config parsed but violates the schema or a model invariant
struct ValidationError : KitError {
    using KitError::KitError;
};

// root search / winding problems
struct SearchError : KitError {
    using KitError::KitError;
};

}  // namespace resokit
