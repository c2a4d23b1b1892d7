// SPDX-License-Identifier: Apache-2.0
#include "elgrat/dtn.hpp"

#include <cmath>

namespace elgrat {

CMat3 dtn_matrix(const ModeData& mode, const Medium& medium) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  const Complex chi = mode.chi;
  const double k2sq = medium.kappa2 * medium.kappa2;
  const Complex db = b1 - b2;

  CMat3 m;
  m(0, 0) = a1 * a1 * db + b2 * chi;
  m(0, 1) = a1 * a2 * db;
  m(0, 2) = a1 * b2 * db;
  m(1, 0) = m(0, 1);
  m(1, 1) = a2 * a2 * db + b2 * chi;
  m(1, 2) = a2 * b2 * db;
  m(2, 0) = -m(0, 2);
  m(2, 1) = -m(1, 2);
  m(2, 2) = k2sq * b2;
  return (iu * medium.mu / chi) * m;
}

CVec3 traction_from_potentials(const ModeData& mode, const Medium& medium,
                               const PotentialCoefficients& pc) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  CVec3 t;
  t[0] = a1 * b1 * pc.phi - b2 * b2 * pc.psi[1] + a2 * b2 * pc.psi[2];
  t[1] = a2 * b1 * pc.phi + b2 * b2 * pc.psi[0] - a1 * b2 * pc.psi[2];
  t[2] = b2 * b2 * pc.phi - a2 * b2 * pc.psi[0] + a1 * b2 * pc.psi[1];
  return -medium.mu * t;
}

FourierVectorField apply_dtn(const FourierVectorField& field,
                             const Lattice& lattice, const Medium& medium) {
  FourierVectorField out;
  out.height = field.height;
  for (const auto& [n, v] : field.coeffs) {
    const ModeData mode = mode_data(lattice, medium, n);
    out.coeffs[n] = dtn_matrix(mode, medium) * v;
  }
  return out;
}

CVec3 incident_traction(const Incidence& inc, const Medium& medium, double h) {
  // mu*d3 + (lambda+mu)*div applied to q*e^{i(alpha.r - beta*x3)}; the
  // divergence of the unit-direction plane wave is i*kappa1.
  const Complex phase = std::exp(-iu * inc.beta * h);
  CVec3 t = -iu * medium.mu * inc.beta * inc.q.cast<Complex>();
  t[2] += iu * (medium.lambda + medium.mu) * medium.kappa1;
  return t * phase;
}

BoundarySource boundary_source_g(const Incidence& inc, const Medium& medium,
                                 double h) {
  const Lattice unit{1.0, 1.0, inc.alpha};
  const ModeData mode0 = mode_data(unit, medium, ModeIndex{0, 0});
  const double om2 = medium.omega * medium.omega;

  BoundarySource g;
  g.phase = std::exp(-iu * inc.beta * h);
  CVec3 dir;
  dir << inc.alpha[0], inc.alpha[1], -mode0.beta2;
  g.g0 = -(2.0 * iu * om2 * inc.beta / (medium.kappa1 * mode0.chi)) * dir *
         g.phase;
  return g;
}

} // namespace elgrat
