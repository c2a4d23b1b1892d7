// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace elgrat {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;
using CVecX = Eigen::VectorXcd;
using CMatX = Eigen::MatrixXcd;

inline constexpr Complex iu{0.0, 1.0};

/// Invalid physical or configuration parameters (CLI exit code 2).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A lattice mode too close to a cutoff wavenumber; the per-mode spectral
/// data is singular there and all operators exclude it.
class ResonanceError : public ParameterError {
public:
  using ParameterError::ParameterError;
};

/// Numerical breakdown: singular systems, non-convergence (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace elgrat
