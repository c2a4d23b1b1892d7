// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "elgrat/modes.hpp"

namespace elgrat {

/// Scalar/vector potential coefficients of one outgoing mode, taken at the
/// trace elevation. psi satisfies alpha1*psi1 + alpha2*psi2 + beta2*psi3 = 0.
struct PotentialCoefficients {
  Complex phi{0.0, 0.0};
  CVec3 psi = CVec3::Zero();
};

/// Finite set of Fourier coefficients of a vector field on the plane x3 = height.
struct FourierVectorField {
  std::map<ModeIndex, CVec3> coeffs;
  double height = 0.0;
};

/// Potential coefficients per mode at x3 = height.
struct PotentialField {
  std::map<ModeIndex, PotentialCoefficients> coeffs;
  double height = 0.0;
};

CVec3 incident_field(const Incidence& inc, const Medium& medium, const Vec3& x);

/// Recovers the potential coefficients of one mode from the displacement
/// coefficient v at the trace elevation (closed-form inverse of the 4x4
/// mode-coupling system).
PotentialCoefficients helmholtz_coefficients(const ModeData& mode,
                                             const Medium& medium,
                                             const CVec3& v);

/// Mode-wise displacement coefficient synthesized from potentials at the
/// trace elevation shifted to x3 (outgoing branch; valid for x3 >= height).
CVec3 mode_displacement(const ModeData& mode, const PotentialCoefficients& pc,
                        double dx3);

/// Evaluates the outgoing displacement field above the trace plane.
CVec3 rayleigh_eval(const PotentialField& field, const Lattice& lattice,
                    const Medium& medium, const Vec3& x);

/// Closed-form reflection of a compressional plane wave by the rigid plane
/// x3 = 0: reflected compressional amplitude a and shear amplitudes b.
struct ExactFlatSolution {
  Incidence incidence;
  Medium medium;
  Complex a{0.0, 0.0};
  CVec3 b = CVec3::Zero();
  Complex beta2{0.0, 0.0}; // vertical shear wavenumber of mode (0,0)
};

ExactFlatSolution exact_flat_solution(const Incidence& inc, const Medium& medium);

/// Total field (incident plus the two reflected terms) at x, x3 >= 0.
CVec3 eval_exact(const ExactFlatSolution& sol, const Vec3& x);

} // namespace elgrat
