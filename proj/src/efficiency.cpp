// SPDX-License-Identifier: Apache-2.0
#include "elgrat/efficiency.hpp"

#include <cmath>

namespace elgrat {

namespace {

// Smallest admissible window containing every propagating mode.
int minimal_window(const Lattice& lattice, const Medium& medium) {
  for (int w = 0; w <= 64; ++w) {
    try {
      (void)propagating_sets(lattice, medium, w);
      return w;
    } catch (const ParameterError&) {
    }
  }
  throw ParameterError("grating_efficiencies: no admissible mode window");
}

} // namespace

EfficiencyTable grating_efficiencies(const FourierVectorField& diffracted,
                                     const Lattice& lattice,
                                     const Medium& medium, const Incidence& inc,
                                     double h) {
  const int window = minimal_window(lattice, medium);
  const PropagatingSets sets = propagating_sets(lattice, medium, window);

  // Incident compressional potential has amplitude -i/kappa1.
  const double a0_sq = 1.0 / (medium.kappa1 * medium.kappa1);
  const double flux0 = inc.beta * a0_sq;

  const auto coeff_of = [&](ModeIndex n) -> CVec3 {
    const auto it = diffracted.coeffs.find(n);
    return it == diffracted.coeffs.end() ? CVec3::Zero() : it->second;
  };

  EfficiencyTable table;
  for (const ModeIndex n : sets.u2) {
    const ModeData mode = mode_data(lattice, medium, n);
    const PotentialCoefficients pc =
        helmholtz_coefficients(mode, medium, coeff_of(n));
    if (mode.propagating1) {
      const Complex a1n = pc.phi * std::exp(-iu * mode.beta1 * h);
      table.e1[n] = mode.beta1.real() * std::norm(a1n) / flux0;
    }
    const CVec3 bn = pc.psi * std::exp(-iu * mode.beta2 * h);
    table.e2[n] = mode.beta2.real() * bn.squaredNorm() / flux0;
  }
  table.total = 0.0;
  for (const auto& [n, e] : table.e1) table.total += e;
  for (const auto& [n, e] : table.e2) table.total += e;
  return table;
}

double energy_balance(const EfficiencyTable& table) {
  return std::abs(table.total - 1.0);
}

} // namespace elgrat
