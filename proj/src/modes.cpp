// SPDX-License-Identifier: Apache-2.0
#include "elgrat/modes.hpp"

#include <cmath>
#include <numbers>

namespace elgrat {

Medium medium_of(double lambda, double mu, double omega) {
  if (!(mu > 0.0))
    throw ParameterError("medium: mu must be positive");
  if (!(lambda + mu > 0.0))
    throw ParameterError("medium: lambda + mu must be positive");
  if (!(omega > 0.0))
    throw ParameterError("medium: omega must be positive");
  Medium m;
  m.lambda = lambda;
  m.mu = mu;
  m.omega = omega;
  m.kappa1 = omega / std::sqrt(lambda + 2.0 * mu);
  m.kappa2 = omega / std::sqrt(mu);
  return m;
}

Incidence incidence_of(const Medium& medium, double theta1, double theta2) {
  constexpr double pi = std::numbers::pi;
  if (!(theta1 >= 0.0) || !(theta1 < pi / 2.0))
    throw ParameterError("incidence: theta1 must lie in [0, pi/2)");
  if (!(theta2 >= 0.0) || !(theta2 <= 2.0 * pi))
    throw ParameterError("incidence: theta2 must lie in [0, 2*pi]");
  Incidence inc;
  inc.theta1 = theta1;
  inc.theta2 = theta2;
  const double s1 = std::sin(theta1), c1 = std::cos(theta1);
  const double s2 = std::sin(theta2), c2 = std::cos(theta2);
  inc.q = Vec3(s1 * c2, s1 * s2, -c1);
  inc.alpha = Vec2(medium.kappa1 * s1 * c2, medium.kappa1 * s1 * s2);
  inc.beta = medium.kappa1 * c1;
  return inc;
}

ModeData mode_data(const Lattice& lattice, const Medium& medium, ModeIndex n) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ModeData d;
  d.index = n;
  d.alpha_n = Vec2(lattice.alpha[0] + two_pi * n.n1 / lattice.period1,
                   lattice.alpha[1] + two_pi * n.n2 / lattice.period2);
  const double r = d.alpha_n.norm();

  const double kappas[2] = {medium.kappa1, medium.kappa2};
  Complex betas[2];
  double deltas[2];
  bool props[2];
  for (int j = 0; j < 2; ++j) {
    const double k = kappas[j];
    if (std::abs(r - k) < kResonanceTolerance * k)
      throw ResonanceError("mode (" + std::to_string(n.n1) + "," +
                           std::to_string(n.n2) +
                           ") is resonant with wavenumber " +
                           std::to_string(k));
    deltas[j] = std::sqrt(std::abs(k * k - r * r));
    props[j] = r < k;
    betas[j] = props[j] ? Complex(deltas[j], 0.0) : Complex(0.0, deltas[j]);
  }
  d.beta1 = betas[0];
  d.beta2 = betas[1];
  d.delta1 = deltas[0];
  d.delta2 = deltas[1];
  d.propagating1 = props[0];
  d.propagating2 = props[1];
  d.chi = r * r + d.beta1 * d.beta2;
  return d;
}

PropagatingSets propagating_sets(const Lattice& lattice, const Medium& medium,
                                 int window) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (window < 0)
    throw ParameterError("propagating_sets: window must be nonnegative");
  // Any mode with |n_i| > window has |alpha_n| at least this large; the
  // window is admissible only if that bound clears the shear cutoff.
  const double outside1 =
      two_pi * (window + 1) / lattice.period1 - std::abs(lattice.alpha[0]);
  const double outside2 =
      two_pi * (window + 1) / lattice.period2 - std::abs(lattice.alpha[1]);
  if (std::min(outside1, outside2) <= medium.kappa2)
    throw ParameterError(
        "propagating_sets: window too small to contain all propagating modes");

  PropagatingSets sets;
  for (int n1 = -window; n1 <= window; ++n1)
    for (int n2 = -window; n2 <= window; ++n2) {
      const ModeData d = mode_data(lattice, medium, ModeIndex{n1, n2});
      if (d.propagating1) sets.u1.push_back(d.index);
      if (d.propagating2) sets.u2.push_back(d.index);
    }
  return sets;
}

} // namespace elgrat
