// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "elgrat/dtn.hpp"
#include "elgrat/modes.hpp"

namespace elgrat {

/// Power-law absorbing profile rho(x3) = 1 + sigma*((x3-start)/thickness)^degree
/// for x3 >= start, identity below. zeta is the complex layer thickness.
struct PmlProfile {
  double start = 0.0;      // layer begins here (trace elevation)
  double thickness = 0.0;  // real layer depth
  Complex sigma{0.0, 0.0}; // absorption strength; Re >= 0, Im >= 0
  int degree = 2;

  Complex rho(double x3) const;
  Complex rho_prime(double x3) const;
  Complex zeta() const; // integral of rho over the layer
  Complex zeta_at(double x3) const;
  bool absorbing() const { return sigma.imag() > 0.0; }
  // customary admissibility threshold for the gap constants
  bool re_zeta_at_least_one() const { return zeta().real() >= 1.0; }
};

PmlProfile make_profile(double start, double thickness, Complex sigma, int degree);

/// The 8x8 mode-coupling system determining the layer coefficients from the
/// displacement data at the layer bottom and the zero condition at the top.
struct LayerSystem {
  Eigen::Matrix<Complex, 8, 8> matrix;
  ModeIndex mode;
};

LayerSystem layer_system(const ModeData& mode, const PmlProfile& profile);

/// Transparent-boundary symbol of the truncated absorbing layer, with the
/// auxiliary scalars exposed for inspection.
struct PmlDtnMatrix {
  CMat3 mhat = CMat3::Zero();
  Complex epsilon{0.0, 0.0};
  Complex theta{0.0, 0.0};
  Complex eta{0.0, 0.0};
  Complex gamma{0.0, 0.0};
  Complex chihat{0.0, 0.0};
  bool chihat_near_singular = false;
};

/// Builds the symbol by solving the (column-scaled) 8x8 layer system for each
/// unit displacement datum and assembling the tractions.
PmlDtnMatrix pml_dtn_from_system(const ModeData& mode, const PmlProfile& profile,
                                 const Medium& medium);

/// Same symbol in closed form through the auxiliary scalars.
PmlDtnMatrix pml_dtn_closed_form(const ModeData& mode, const PmlProfile& profile,
                                 const Medium& medium);

/// Alternate quartic-numerator form of the gamma auxiliary, retained only so
/// cross-checks can quantify how far it sits from the layer-system route.
Complex pml_gamma_quartic_variant(const ModeData& mode, const PmlProfile& profile);

/// Boundary data of the layer-truncated transparent boundary condition,
/// computed as incident traction minus symbol times incident trace.
BoundarySource pml_source_g(const Incidence& inc, const Medium& medium,
                            const PmlProfile& profile);

} // namespace elgrat
