// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "elgrat/fields.hpp"

namespace elgrat {

/// Normalized energy fluxes of the propagating reflected modes; e1 for the
/// compressional branch (over U1), e2 for the shear branch (over U2).
struct EfficiencyTable {
  std::map<ModeIndex, double> e1;
  std::map<ModeIndex, double> e2;
  double total = 0.0;
};

/// Computes the efficiencies from the Fourier coefficients of the diffracted
/// field (total minus incident) on the trace plane x3 = h. Modes missing from
/// the field are taken as zero.
EfficiencyTable grating_efficiencies(const FourierVectorField& diffracted,
                                     const Lattice& lattice,
                                     const Medium& medium, const Incidence& inc,
                                     double h);

/// |total - 1|: deviation from energy conservation.
double energy_balance(const EfficiencyTable& table);

} // namespace elgrat
