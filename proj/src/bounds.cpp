// SPDX-License-Identifier: Apache-2.0
#include "elgrat/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace elgrat {

namespace {

double expm1_pos(double x) {
  const double v = std::expm1(x);
  if (!(v > 0.0))
    throw NumericalError("modeling constant: non-absorbing layer, a "
                         "denominator e^x - 1 is not positive");
  return v;
}

} // namespace

CutoffDistances cutoff_distances(const Lattice& lattice, const Medium& medium,
                                 int window) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  CutoffDistances d{inf, inf, inf, inf};
  (void)propagating_sets(lattice, medium, window);
  for (int n1 = -window; n1 <= window; ++n1)
    for (int n2 = -window; n2 <= window; ++n2) {
      const ModeData m = mode_data(lattice, medium, ModeIndex{n1, n2});
      if (m.propagating1)
        d.delta1_minus = std::min(d.delta1_minus, m.delta1);
      else
        d.delta1_plus = std::min(d.delta1_plus, m.delta1);
      if (m.propagating2)
        d.delta2_minus = std::min(d.delta2_minus, m.delta2);
      else
        d.delta2_plus = std::min(d.delta2_plus, m.delta2);
    }
  // Certify the in-window complement minima against the analytic lower
  // bound of every out-of-window mode: |alpha_n| grows at least like the
  // lattice spacing times the window size.
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double outside =
      std::min(two_pi * (window + 1) / lattice.period1 -
                   std::abs(lattice.alpha[0]),
               two_pi * (window + 1) / lattice.period2 -
                   std::abs(lattice.alpha[1]));
  const double bound1 =
      std::sqrt(outside * outside - medium.kappa1 * medium.kappa1);
  const double bound2 =
      std::sqrt(outside * outside - medium.kappa2 * medium.kappa2);
  if (d.delta1_plus > bound1 || d.delta2_plus > bound2)
    throw ParameterError(
        "cutoff_distances: window too small to certify the complement minima");
  return d;
}

double modeling_constant_K(const Medium& medium, const Incidence& inc,
                           const Lattice& lattice, const PmlProfile& profile,
                           int window) {
  const CutoffDistances d = cutoff_distances(lattice, medium, window);
  const Complex zeta = profile.zeta();
  const double re = zeta.real(), im = zeta.imag();

  const double t1 = 1.0 / expm1_pos(d.delta1_minus * im);
  const double t2 = std::pow(1.0 / expm1_pos(0.5 * d.delta1_minus * im), 2);
  const double t3 = std::pow(1.0 / expm1_pos(d.delta1_minus * im / 3.0), 3);
  const double t4 = 1.0 / expm1_pos(d.delta2_plus * re);
  const double t5 = std::pow(1.0 / expm1_pos(0.5 * d.delta2_plus * re), 2);
  const double t6 = std::pow(1.0 / expm1_pos(d.delta2_plus * re / 3.0), 3);
  const double t7 = 1.0 / expm1_pos(d.delta2_minus * im);
  const double num8 =
      std::pow(std::exp(-d.delta1_plus * re) + std::exp(-d.delta2_minus * im), 2);
  const double den8 = -std::expm1(-2.0 * d.delta1_plus * im) *
                      std::pow(-std::expm1(-2.0 * d.delta2_minus * re), 2);
  if (!(den8 > 0.0))
    throw NumericalError("modeling constant: non-absorbing layer, a "
                         "denominator 1 - e^-x is not positive");
  const double t8 = num8 / den8;

  const double worst =
      std::max({t1, t2, t3, t4, t5, t6, t7, t8});
  const double k2sq = medium.kappa2 * medium.kappa2;
  const double k1sq = medium.kappa1 * medium.kappa1;
  return 48.0 * std::pow(49.0 + k2sq, 3.5) / k1sq * worst;
}

GapReport operator_gap(const Lattice& lattice, const Medium& medium,
                       const Incidence& inc, const PmlProfile& profile,
                       int window, double a_floor, double assumed_gamma1) {
  GapReport rep;
  rep.K = modeling_constant_K(medium, inc, lattice, profile, window);
  const double k1 = medium.kappa1;
  rep.Khat = 11.0 * medium.mu * rep.K / std::pow(k1, 4);
  rep.Khat_mu_squared = rep.Khat * medium.mu;
  rep.Khat_sqrt116 = std::sqrt(116.0) * medium.mu * rep.K / std::pow(k1, 4);

  const double h = profile.start;
  if (!(h > a_floor))
    throw ParameterError("operator_gap: trace elevation must exceed the "
                         "lowest surface point");
  rep.gamma2 = std::sqrt(1.0 + 1.0 / (h - a_floor));

  rep.worst_gap = 0.0;
  for (int n1 = -window; n1 <= window; ++n1)
    for (int n2 = -window; n2 <= window; ++n2) {
      const ModeData m = mode_data(lattice, medium, ModeIndex{n1, n2});
      const CMat3 exact = dtn_matrix(m, medium);
      const CMat3 layer = pml_dtn_closed_form(m, profile, medium).mhat;
      const double gap = (exact - layer).norm();
      if (gap > rep.worst_gap) {
        rep.worst_gap = gap;
        rep.worst_mode = ModeIndex{n1, n2};
      }
    }
  rep.bound_satisfied = rep.worst_gap <= rep.Khat;
  rep.condition_margin = assumed_gamma1 - rep.Khat * rep.gamma2 * rep.gamma2;
  return rep;
}

PropositionReport proposition_checks(
    const Medium& medium, const Lattice& lattice, const Incidence& inc,
    int window, const std::vector<std::pair<double, double>>& sk_grid,
    double t_max, int t_points) {
  PropositionReport rep;
  const double k1sq = medium.kappa1 * medium.kappa1;
  const double k2sq = medium.kappa2 * medium.kappa2;

  rep.chi_bounds_hold = true;
  rep.chi_min_margin = std::numeric_limits<double>::infinity();
  rep.chi_max_margin = std::numeric_limits<double>::infinity();
  for (int n1 = -window; n1 <= window; ++n1)
    for (int n2 = -window; n2 <= window; ++n2) {
      const ModeData m = mode_data(lattice, medium, ModeIndex{n1, n2});
      const double c = std::abs(m.chi);
      rep.chi_min_margin = std::min(rep.chi_min_margin, c - k1sq);
      rep.chi_max_margin = std::min(rep.chi_max_margin, k2sq - c);
      if (!(c > k1sq) || !(c < k2sq)) {
        rep.chi_bounds_hold = false;
        rep.chi_violations.push_back({ModeIndex{n1, n2}, c, k1sq});
      }
    }

  rep.envelope_holds = true;
  rep.envelope_worst_ratio = 0.0;
  for (const auto& [s, k] : sk_grid) {
    const double bound = std::pow(s * s + k * k, k / 2.0);
    double worst = 0.0;
    for (int i = 1; i <= t_points; ++i) {
      const double t = s + (t_max - s) * double(i) / double(t_points);
      const double g = std::pow(t, k) * std::exp(-std::sqrt(t * t - s * s));
      worst = std::max(worst, g);
    }
    const double ratio = worst / bound;
    rep.envelope_worst_ratio = std::max(rep.envelope_worst_ratio, ratio);
    if (ratio > 1.0) {
      rep.envelope_holds = false;
      rep.envelope_failures.emplace_back(s, k);
    }
  }
  return rep;
}

} // namespace elgrat
