// SPDX-License-Identifier: Apache-2.0
#include "elgrat/fields.hpp"

#include <cmath>

namespace elgrat {

CVec3 incident_field(const Incidence& inc, const Medium& medium, const Vec3& x) {
  const Complex phase = std::exp(iu * (medium.kappa1 * x.dot(inc.q)));
  return inc.q.cast<Complex>() * phase;
}

PotentialCoefficients helmholtz_coefficients(const ModeData& mode,
                                             const Medium& medium,
                                             const CVec3& v) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  const Complex chi = mode.chi;
  const double k2sq = medium.kappa2 * medium.kappa2;

  PotentialCoefficients pc;
  pc.phi = -iu / chi * (a1 * v[0] + a2 * v[1] + b2 * v[2]);
  pc.psi[0] = -iu / chi *
              (a1 * a2 * (b1 - b2) * v[0] / k2sq +
               (a1 * a1 * b2 + a2 * a2 * b1 + b1 * b2 * b2) * v[1] / k2sq -
               a2 * v[2]);
  pc.psi[1] = -iu / chi *
              (-(a1 * a1 * b1 + a2 * a2 * b2 + b1 * b2 * b2) * v[0] / k2sq -
               a1 * a2 * (b1 - b2) * v[1] / k2sq + a1 * v[2]);
  pc.psi[2] = -iu / k2sq * (a2 * v[0] - a1 * v[1]);
  return pc;
}

CVec3 mode_displacement(const ModeData& mode, const PotentialCoefficients& pc,
                        double dx3) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  const Complex e1 = std::exp(iu * b1 * dx3);
  const Complex e2 = std::exp(iu * b2 * dx3);
  CVec3 comp, shear;
  comp << a1 * pc.phi, a2 * pc.phi, b1 * pc.phi;
  shear << a2 * pc.psi[2] - b2 * pc.psi[1],
           b2 * pc.psi[0] - a1 * pc.psi[2],
           a1 * pc.psi[1] - a2 * pc.psi[0];
  return iu * (comp * e1 + shear * e2);
}

CVec3 rayleigh_eval(const PotentialField& field, const Lattice& lattice,
                    const Medium& medium, const Vec3& x) {
  CVec3 out = CVec3::Zero();
  const double dx3 = x[2] - field.height;
  for (const auto& [n, pc] : field.coeffs) {
    const ModeData mode = mode_data(lattice, medium, n);
    const Complex horiz =
        std::exp(iu * (mode.alpha_n[0] * x[0] + mode.alpha_n[1] * x[1]));
    out += mode_displacement(mode, pc, dx3) * horiz;
  }
  return out;
}

ExactFlatSolution exact_flat_solution(const Incidence& inc, const Medium& medium) {
  const Lattice unit{1.0, 1.0, inc.alpha};
  const ModeData mode0 = mode_data(unit, medium, ModeIndex{0, 0});

  ExactFlatSolution sol;
  sol.incidence = inc;
  sol.medium = medium;
  sol.beta2 = mode0.beta2;

  // Reflected amplitudes solve the rigid-boundary system with the incident
  // polarization as data; same closed form as helmholtz_coefficients with
  // v = -q up to the sign convention absorbed here.
  const PotentialCoefficients pc =
      helmholtz_coefficients(mode0, medium, -inc.q.cast<Complex>());
  sol.a = pc.phi;
  sol.b = pc.psi;
  return sol;
}

CVec3 eval_exact(const ExactFlatSolution& sol, const Vec3& x) {
  if (x[2] < 0.0)
    throw ParameterError("eval_exact: x3 must be nonnegative");
  const Incidence& inc = sol.incidence;
  const double a1 = inc.alpha[0], a2 = inc.alpha[1], beta = inc.beta;
  const Complex horiz = std::exp(iu * (a1 * x[0] + a2 * x[1]));

  const CVec3 u_inc =
      inc.q.cast<Complex>() * std::exp(-iu * beta * x[2]) * horiz;

  CVec3 comp, shear;
  comp << a1 * sol.a, a2 * sol.a, beta * sol.a;
  shear << a2 * sol.b[2] - sol.beta2 * sol.b[1],
           sol.beta2 * sol.b[0] - a1 * sol.b[2],
           a1 * sol.b[1] - a2 * sol.b[0];
  return u_inc + iu * horiz *
                     (comp * std::exp(iu * beta * x[2]) +
                      shear * std::exp(iu * sol.beta2 * x[2]));
}

} // namespace elgrat
