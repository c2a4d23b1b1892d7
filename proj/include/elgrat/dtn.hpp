// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "elgrat/fields.hpp"
#include "elgrat/modes.hpp"

namespace elgrat {

/// Fourier symbol of the transparent boundary operator: maps the displacement
/// coefficient of one mode at the trace plane to its traction coefficient.
CMat3 dtn_matrix(const ModeData& mode, const Medium& medium);

/// Traction coefficient mu*d3(u) + (lambda+mu)*div(u)*e3 of the outgoing mode
/// synthesized from the given potentials, evaluated at the trace plane.
/// Independent route from dtn_matrix; the two must agree on consistent data.
CVec3 traction_from_potentials(const ModeData& mode, const Medium& medium,
                               const PotentialCoefficients& pc);

/// Mode-wise application of the transparent boundary operator.
FourierVectorField apply_dtn(const FourierVectorField& field,
                             const Lattice& lattice, const Medium& medium);

/// Mode-0 traction coefficient of the incident plane wave at elevation h
/// (horizontal phase factor excluded).
CVec3 incident_traction(const Incidence& inc, const Medium& medium, double h);

/// Boundary data of the total-field transparent boundary condition; the
/// incident wave populates mode (0,0) only.
struct BoundarySource {
  CVec3 g0 = CVec3::Zero();   // mode-0 coefficient, phase included
  Complex phase{1.0, 0.0};    // e^{-i*beta*h} factor, kept for inspection
};

BoundarySource boundary_source_g(const Incidence& inc, const Medium& medium,
                                 double h);

} // namespace elgrat
