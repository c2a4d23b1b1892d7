// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <vector>

#include "elgrat/types.hpp"

namespace elgrat {

/// Isotropic elastic half-space: Lame constants, angular frequency, and the
/// derived compressional (kappa1) and shear (kappa2) wavenumbers.
struct Medium {
  double lambda = 0.0;
  double mu = 0.0;
  double omega = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

Medium medium_of(double lambda, double mu, double omega);

/// Compressional plane-wave incidence. alpha is the horizontal (Bloch) wave
/// vector, beta the vertical wavenumber, q the unit propagation direction.
struct Incidence {
  double theta1 = 0.0;
  double theta2 = 0.0;
  Vec2 alpha = Vec2::Zero();
  double beta = 0.0;
  Vec3 q = Vec3::Zero();
};

Incidence incidence_of(const Medium& medium, double theta1, double theta2);

/// Horizontal periods plus the Bloch offset of the incident wave.
struct Lattice {
  double period1 = 1.0;
  double period2 = 1.0;
  Vec2 alpha = Vec2::Zero();
};

inline Lattice lattice_of(double period1, double period2, const Incidence& inc) {
  if (!(period1 > 0.0) || !(period2 > 0.0))
    throw ParameterError("lattice periods must be positive");
  return Lattice{period1, period2, inc.alpha};
}

struct ModeIndex {
  int n1 = 0;
  int n2 = 0;
  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Spectral data of one lattice mode: horizontal wave vector, the two
/// vertical wavenumbers beta1/beta2 (real for propagating, i*positive for
/// evanescent), chi = |alpha_n|^2 + beta1*beta2, and the |kappa_j^2-|alpha_n|^2|^(1/2)
/// magnitudes delta1/delta2.
struct ModeData {
  ModeIndex index;
  Vec2 alpha_n = Vec2::Zero();
  Complex beta1{0.0, 0.0};
  Complex beta2{0.0, 0.0};
  Complex chi{0.0, 0.0};
  double delta1 = 0.0;
  double delta2 = 0.0;
  bool propagating1 = false;
  bool propagating2 = false;
};

/// Relative distance from a cutoff below which a mode is rejected as resonant.
inline constexpr double kResonanceTolerance = 1e-12;

ModeData mode_data(const Lattice& lattice, const Medium& medium, ModeIndex n);

struct PropagatingSets {
  std::vector<ModeIndex> u1; // |alpha_n| < kappa1
  std::vector<ModeIndex> u2; // |alpha_n| < kappa2; u1 is a subset
};

/// Enumerates the propagating mode sets over the window |n_i| <= window and
/// verifies that no propagating mode can lie outside it.
PropagatingSets propagating_sets(const Lattice& lattice, const Medium& medium,
                                 int window);

} // namespace elgrat
