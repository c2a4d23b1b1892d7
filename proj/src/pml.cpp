// SPDX-License-Identifier: Apache-2.0
#include "elgrat/pml.hpp"

#include <cmath>

namespace elgrat {

namespace {

// e^{i*beta*zeta}: the exponent has nonpositive real part whenever
// Re/Im beta >= 0 and Re/Im zeta >= 0, so the magnitude never exceeds 1.
Complex decay_exponential(Complex beta, Complex zeta) {
  return std::exp(iu * beta * zeta);
}

struct Auxiliaries {
  Complex e1, e2;          // e^{i*beta1*zeta}, e^{i*beta2*zeta}
  Complex epsilon, theta, eta, gamma, chihat;
};

Auxiliaries auxiliaries_of(const ModeData& mode, const PmlProfile& profile) {
  const Complex zeta = profile.zeta();
  Auxiliaries aux;
  aux.e1 = decay_exponential(mode.beta1, zeta);
  aux.e2 = decay_exponential(mode.beta2, zeta);
  const Complex e1sq = aux.e1 * aux.e1;
  const Complex e2sq = aux.e2 * aux.e2;
  const Complex d1 = 1.0 - e1sq;
  const Complex d2 = 1.0 - e2sq;
  aux.epsilon = 2.0 * e2sq / d2;
  aux.theta = (aux.e2 - aux.e1) * (aux.e2 - aux.e1) / (d1 * d2);
  aux.eta = (e2sq - e1sq) / (d1 * d2);
  aux.gamma = -aux.eta;
  const double r2 = mode.alpha_n.squaredNorm();
  aux.chihat =
      mode.chi + 4.0 * r2 * mode.beta1 * mode.beta2 * aux.theta / mode.chi;
  return aux;
}

} // namespace

Complex PmlProfile::rho(double x3) const {
  if (x3 < start) return Complex(1.0, 0.0);
  return 1.0 + sigma * std::pow((x3 - start) / thickness, degree);
}

Complex PmlProfile::rho_prime(double x3) const {
  if (x3 < start) return Complex(0.0, 0.0);
  return sigma * double(degree) / thickness *
         std::pow((x3 - start) / thickness, degree - 1);
}

Complex PmlProfile::zeta() const {
  return thickness + sigma * thickness / double(degree + 1);
}

Complex PmlProfile::zeta_at(double x3) const {
  if (x3 <= start) return Complex(0.0, 0.0);
  const double t = (x3 - start) / thickness;
  return (x3 - start) +
         sigma * thickness / double(degree + 1) * std::pow(t, degree + 1);
}

PmlProfile make_profile(double start, double thickness, Complex sigma,
                        int degree) {
  if (!(thickness > 0.0))
    throw ParameterError("pml: thickness must be positive");
  if (degree < 1)
    throw ParameterError("pml: degree must be at least 1");
  if (sigma.real() < 0.0 || sigma.imag() < 0.0)
    throw ParameterError("pml: Re sigma and Im sigma must be nonnegative");
  return PmlProfile{start, thickness, sigma, degree};
}

LayerSystem layer_system(const ModeData& mode, const PmlProfile& profile) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  const Complex zeta = profile.zeta();
  const Complex e1 = decay_exponential(mode.beta1, zeta);
  const Complex e2 = decay_exponential(mode.beta2, zeta);
  const Complex f1 = 1.0 / e1; // grows for strongly evanescent modes
  const Complex f2 = 1.0 / e2;

  LayerSystem sys;
  sys.mode = mode.index;
  sys.matrix << a1, a1, 0, 0, -b2, b2, a2, a2,
      a2, a2, b2, -b2, 0, 0, -a1, -a1,
      b1, -b1, -a2, -a2, a1, a1, 0, 0,
      a1 * e1, a1 * f1, 0, 0, -b2 * e2, b2 * f2, a2 * e2, a2 * f2,
      a2 * e1, a2 * f1, b2 * e2, -b2 * f2, 0, 0, -a1 * e2, -a1 * f2,
      b1 * e1, -b1 * f1, -a2 * e2, -a2 * f2, a1 * e2, a1 * f2, 0, 0,
      0, 0, a1, a1, a2, a2, b2, -b2,
      0, 0, a1 * e2, a1 * f2, a2 * e2, a2 * f2, b2 * e2, -b2 * f2;
  return sys;
}

PmlDtnMatrix pml_dtn_from_system(const ModeData& mode, const PmlProfile& profile,
                                 const Medium& medium) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  const Auxiliaries aux = auxiliaries_of(mode, profile);
  const Complex e1 = aux.e1, e2 = aux.e2;

  // Down-going unknowns are rescaled by their top-of-layer decay factor so
  // every matrix entry stays bounded for evanescent modes.
  Eigen::Matrix<Complex, 8, 8> a;
  a << a1, a1 * e1, 0, 0, -b2, b2 * e2, a2, a2 * e2,
      a2, a2 * e1, b2, -b2 * e2, 0, 0, -a1, -a1 * e2,
      b1, -b1 * e1, -a2, -a2 * e2, a1, a1 * e2, 0, 0,
      a1 * e1, a1, 0, 0, -b2 * e2, b2, a2 * e2, a2,
      a2 * e1, a2, b2 * e2, -b2, 0, 0, -a1 * e2, -a1,
      b1 * e1, -b1, -a2 * e2, -a2, a1 * e2, a1, 0, 0,
      0, 0, a1, a1 * e2, a2, a2 * e2, b2, -b2 * e2,
      0, 0, a1 * e2, a1, a2 * e2, a2, b2 * e2, -b2;

  Eigen::Matrix<Complex, 3, 8> p;
  p << -a1 * b1, a1 * b1 * e1, 0, 0, b2 * b2, b2 * b2 * e2, -a2 * b2,
      a2 * b2 * e2,
      -a2 * b1, a2 * b1 * e1, -b2 * b2, -b2 * b2 * e2, 0, 0, a1 * b2,
      -a1 * b2 * e2,
      -b2 * b2, -b2 * b2 * e1, a2 * b2, -a2 * b2 * e2, -a1 * b2, a1 * b2 * e2,
      0, 0;

  Eigen::PartialPivLU<Eigen::Matrix<Complex, 8, 8>> lu(a);
  if (!(lu.rcond() > 1e-12))
    throw NumericalError("pml layer system is numerically singular (rcond "
                         "below 1e-12)");

  PmlDtnMatrix out;
  out.epsilon = aux.epsilon;
  out.theta = aux.theta;
  out.eta = aux.eta;
  out.gamma = aux.gamma;
  out.chihat = aux.chihat;
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix<Complex, 8, 1> rhs = Eigen::Matrix<Complex, 8, 1>::Zero();
    rhs[k] = -iu;
    const Eigen::Matrix<Complex, 8, 1> x = lu.solve(rhs);
    out.mhat.col(k) = medium.mu * (p * x);
  }
  return out;
}

PmlDtnMatrix pml_dtn_closed_form(const ModeData& mode, const PmlProfile& profile,
                                 const Medium& medium) {
  const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
  const Complex b1 = mode.beta1, b2 = mode.beta2;
  const Complex chi = mode.chi;
  const double k2sq = medium.kappa2 * medium.kappa2;
  const Complex db = b1 - b2;
  const Auxiliaries aux = auxiliaries_of(mode, profile);
  const Complex ep1 = aux.epsilon + 1.0;

  PmlDtnMatrix out;
  out.epsilon = aux.epsilon;
  out.theta = aux.theta;
  out.eta = aux.eta;
  out.gamma = aux.gamma;
  out.chihat = aux.chihat;
  const double k1sq = medium.kappa1 * medium.kappa1;
  out.chihat_near_singular = std::abs(aux.chihat) < 1e-8 * k1sq;

  const Complex pref = iu * medium.mu / (chi * aux.chihat);
  CMat3& m = out.mhat;
  m(0, 0) = pref * (chi * (a1 * a1 * db + b2 * chi) * ep1 +
                    4.0 * a2 * a2 * b1 * b2 * b2 * aux.theta * ep1 -
                    2.0 * a1 * a1 * b1 * k2sq * aux.eta);
  m(0, 1) = pref * a1 * a2 *
            (chi * db * ep1 - 2.0 * chi * b1 * aux.eta -
             4.0 * b1 * b2 * b2 * aux.theta * ep1 -
             2.0 * b1 * b2 * db * aux.gamma);
  m(0, 2) = pref * a1 * b2 *
            (chi * db + 2.0 * b1 * (k2sq - 2.0 * b2 * b2) * aux.theta);
  m(1, 0) = m(0, 1);
  m(1, 1) = pref * (chi * (a2 * a2 * db + b2 * chi) * ep1 +
                    4.0 * a1 * a1 * b1 * b2 * b2 * aux.theta * ep1 -
                    2.0 * a2 * a2 * b1 * k2sq * aux.eta);
  m(1, 2) = pref * a2 * b2 *
            (chi * db + 2.0 * b1 * (k2sq - 2.0 * b2 * b2) * aux.theta);
  m(2, 0) = -m(0, 2);
  m(2, 1) = -m(1, 2);
  m(2, 2) = pref * b2 * k2sq * (chi * ep1 - 2.0 * b1 * b2 * aux.eta);
  return out;
}

Complex pml_gamma_quartic_variant(const ModeData& mode,
                                  const PmlProfile& profile) {
  const Complex zeta = profile.zeta();
  const Complex e1 = decay_exponential(mode.beta1, zeta);
  const Complex e2 = decay_exponential(mode.beta2, zeta);
  const Complex e1sq = e1 * e1;
  const Complex e2sq = e2 * e2;
  const Complex num = e1sq + e2sq * e2sq;
  return num * num / ((1.0 - e1sq) * (1.0 - e2sq) * (1.0 - e2sq));
}

BoundarySource pml_source_g(const Incidence& inc, const Medium& medium,
                            const PmlProfile& profile) {
  const Lattice unit{1.0, 1.0, inc.alpha};
  const ModeData mode0 = mode_data(unit, medium, ModeIndex{0, 0});
  const double h = profile.start;

  const PmlDtnMatrix symbol = pml_dtn_from_system(mode0, profile, medium);
  const CVec3 trace =
      inc.q.cast<Complex>() * std::exp(-iu * inc.beta * h);

  BoundarySource g;
  g.phase = std::exp(-iu * inc.beta * h);
  g.g0 = incident_traction(inc, medium, h) - symbol.mhat * trace;
  return g;
}

} // namespace elgrat
