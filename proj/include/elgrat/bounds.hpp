// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "elgrat/pml.hpp"

namespace elgrat {

/// Cutoff distances entering the layer modeling constant: delta_minus[j] is
/// the minimum of delta_j over propagating modes, delta_plus[j] the minimum
/// over the (infinite) complement, attained near the cutoff circle.
struct CutoffDistances {
  double delta1_minus = 0.0;
  double delta2_minus = 0.0;
  double delta1_plus = 0.0;
  double delta2_plus = 0.0;
};

CutoffDistances cutoff_distances(const Lattice& lattice, const Medium& medium,
                                 int window);

/// The modeling-error constant: a prefactor in the shear wavenumber times the
/// largest of eight exponentially decaying terms in Re zeta and Im zeta.
double modeling_constant_K(const Medium& medium, const Incidence& inc,
                           const Lattice& lattice, const PmlProfile& profile,
                           int window);

struct GapReport {
  double K = 0.0;
  double Khat = 0.0;           // 11*mu*K/kappa1^4, the bound actually checked
  double Khat_mu_squared = 0.0; // 11*mu^2*K/kappa1^4 variant
  double Khat_sqrt116 = 0.0;    // sqrt(116)*mu*K/kappa1^4 variant
  double gamma2 = 0.0;          // trace constant (1 + (h-a)^-1)^(1/2)
  double worst_gap = 0.0;       // max Frobenius distance between the symbols
  ModeIndex worst_mode;
  bool bound_satisfied = false; // worst_gap <= Khat
  double condition_margin = 0.0; // assumed_gamma1 - Khat*gamma2^2
};

/// Sweeps |n_i| <= window, comparing the exact and layer-truncated boundary
/// symbols mode by mode against the K-hat bound. `a_floor` is the lowest
/// surface elevation (0 for the geometries built here).
GapReport operator_gap(const Lattice& lattice, const Medium& medium,
                       const Incidence& inc, const PmlProfile& profile,
                       int window, double a_floor = 0.0,
                       double assumed_gamma1 = 1.0);

struct PropositionViolation {
  ModeIndex mode;
  double value = 0.0;
  double bound = 0.0;
};

struct PropositionReport {
  bool chi_bounds_hold = false;   // kappa1^2 < |chi_n| < kappa2^2 on the window
  double chi_min_margin = 0.0;
  double chi_max_margin = 0.0;
  std::vector<PropositionViolation> chi_violations;
  bool envelope_holds = false;    // t^k e^{-sqrt(t^2-s^2)} <= (s^2+k^2)^(k/2)
  double envelope_worst_ratio = 0.0;
  std::vector<std::pair<double, double>> envelope_failures; // (s, k) pairs
};

PropositionReport proposition_checks(
    const Medium& medium, const Lattice& lattice, const Incidence& inc,
    int window, const std::vector<std::pair<double, double>>& sk_grid,
    double t_max = 100.0, int t_points = 10000);

} // namespace elgrat
