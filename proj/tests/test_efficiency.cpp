// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "elgrat/efficiency.hpp"
#include "test_helpers.hpp"

using namespace elgrat;
using namespace elgrat::testing;
namespace nb = std::numbers;

namespace {

// mode-0 coefficient of the diffracted part of the flat exact solution at h
CVec3 diffracted_mode0(const ExactFlatSolution& sol, double h) {
  const double a1 = sol.incidence.alpha[0], a2 = sol.incidence.alpha[1];
  const double beta = sol.incidence.beta;
  CVec3 comp, shear;
  comp << a1 * sol.a, a2 * sol.a, beta * sol.a;
  shear << a2 * sol.b[2] - sol.beta2 * sol.b[1],
      sol.beta2 * sol.b[0] - a1 * sol.b[2],
      a1 * sol.b[1] - a2 * sol.b[0];
  return iu * (comp * std::exp(iu * beta * h) +
               shear * std::exp(iu * sol.beta2 * h));
}

FourierVectorField exact_diffracted_field(const Medium& m, const Incidence& inc,
                                          double h) {
  const ExactFlatSolution sol = exact_flat_solution(inc, m);
  FourierVectorField field;
  field.height = h;
  field.coeffs[{0, 0}] = diffracted_mode0(sol, h);
  return field;
}

} // namespace

TEST_CASE("normal incidence reflects into the specular compressional mode") {
  const Medium m = example_medium();
  const Incidence normal = incidence_of(m, 0.0, 0.0);
  const Lattice lat = lattice_of(1.0, 1.0, normal);
  const double h = 0.3;
  const EfficiencyTable table = grating_efficiencies(
      exact_diffracted_field(m, normal, h), lat, m, normal, h);
  CHECK(table.e1.at({0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.e2.at({0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(energy_balance(table) < 1e-12);
}

TEST_CASE("energy conservation for the oblique exact solution") {
  const Medium m = example_medium();
  const double h = 0.3;

  SUBCASE("reference angles") {
    const Incidence inc = example_incidence();
    const Lattice lat = lattice_of(1.0, 1.0, inc);
    const EfficiencyTable table = grating_efficiencies(
        exact_diffracted_field(m, inc, h), lat, m, inc, h);
    CHECK(energy_balance(table) < 1e-10);
    CHECK(table.e1.at({0, 0}) > 0.0);
    CHECK(table.e2.at({0, 0}) > 0.0);
  }

  SUBCASE("angle sweep with the independent flux identity") {
    for (int i = 0; i < 10; ++i) {
      const double t1 = 0.05 + 0.135 * i;
      const double t2 = 0.2 + 0.6 * i;
      const Incidence inc = incidence_of(m, t1, t2);
      const Lattice lat = lattice_of(1.0, 1.0, inc);
      const EfficiencyTable table = grating_efficiencies(
          exact_diffracted_field(m, inc, h), lat, m, inc, h);
      CHECK(energy_balance(table) < 1e-10);

      // Im(conj(phi) d3 phi - conj(psi).(e3 x curl psi)) vanishes at the
      // trace plane; the mode-wise evaluation is analytic
      const ExactFlatSolution sol = exact_flat_solution(inc, m);
      const double a1 = inc.alpha[0], a2 = inc.alpha[1], beta = inc.beta;
      const Complex b2 = sol.beta2;
      const Complex a0 = -iu / m.kappa1;
      const Complex phi_h =
          a0 * std::exp(-iu * beta * h) + sol.a * std::exp(iu * beta * h);
      const Complex dphi_h = -iu * beta * a0 * std::exp(-iu * beta * h) +
                             iu * beta * sol.a * std::exp(iu * beta * h);
      const CVec3 psi_h = sol.b * std::exp(iu * b2 * h);
      CVec3 e3_curl;
      e3_curl << iu * (a1 * psi_h[2] - b2 * psi_h[0]),
          iu * (a2 * psi_h[2] - b2 * psi_h[1]), 0.0;
      const double term1 = std::imag(std::conj(phi_h) * dphi_h);
      const double term2 = std::imag(psi_h.dot(e3_curl));
      CHECK(std::abs(term1 - term2) < 1e-12 * (std::abs(term1) + 1.0));
    }
  }
}

TEST_CASE("flux identity for the exact solution") {
  // Im( conj(phi) d3 phi - conj(psi).(e3 x curl psi) ) integrates to zero
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  const ExactFlatSolution sol = exact_flat_solution(inc, m);
  const double h = 0.3;
  const double a1 = inc.alpha[0], a2 = inc.alpha[1], beta = inc.beta;
  const Complex b2 = sol.beta2;
  const Complex a0 = -iu / m.kappa1;

  const Complex phi_h = a0 * std::exp(-iu * beta * h) +
                        sol.a * std::exp(iu * beta * h);
  const Complex dphi_h = -iu * beta * a0 * std::exp(-iu * beta * h) +
                         iu * beta * sol.a * std::exp(iu * beta * h);
  const CVec3 psi_h = sol.b * std::exp(iu * b2 * h);
  CVec3 e3_curl;
  e3_curl << iu * (a1 * psi_h[2] - b2 * psi_h[0]),
      iu * (a2 * psi_h[2] - b2 * psi_h[1]), 0.0;

  const double term1 = std::imag(std::conj(phi_h) * dphi_h);
  const double term2 = std::imag(psi_h.dot(e3_curl));
  CHECK(std::abs(term1 - term2) < 1e-12 * (std::abs(term1) + 1.0));
}

TEST_CASE("efficiency table properties") {
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  const Lattice lat = lattice_of(1.0, 1.0, inc);
  const double h = 0.3;
  const FourierVectorField base = exact_diffracted_field(m, inc, h);

  SUBCASE("phase invariance") {
    FourierVectorField rotated = base;
    const Complex unit = std::exp(iu * 0.7341);
    for (auto& [n, v] : rotated.coeffs) v *= unit;
    const EfficiencyTable t0 = grating_efficiencies(base, lat, m, inc, h);
    const EfficiencyTable t1 = grating_efficiencies(rotated, lat, m, inc, h);
    CHECK(t1.e1.at({0, 0}) == doctest::Approx(t0.e1.at({0, 0})).epsilon(1e-13));
    CHECK(t1.e2.at({0, 0}) == doctest::Approx(t0.e2.at({0, 0})).epsilon(1e-13));
  }

  SUBCASE("quadratic scaling") {
    FourierVectorField scaled = base;
    for (auto& [n, v] : scaled.coeffs) v *= 0.5;
    const EfficiencyTable t0 = grating_efficiencies(base, lat, m, inc, h);
    const EfficiencyTable t1 = grating_efficiencies(scaled, lat, m, inc, h);
    CHECK(t1.total == doctest::Approx(0.25 * t0.total).epsilon(1e-12));
  }

  SUBCASE("zero data misses all the energy") {
    FourierVectorField zero;
    zero.height = h;
    const EfficiencyTable t = grating_efficiencies(zero, lat, m, inc, h);
    CHECK(t.total == 0.0);
    CHECK(energy_balance(t) == doctest::Approx(1.0));
  }

  SUBCASE("evanescent-only data carries no flux") {
    FourierVectorField evan;
    evan.height = h;
    evan.coeffs[{3, 3}] = CVec3(1.0, 2.0, Complex(0.0, 1.0));
    const EfficiencyTable t = grating_efficiencies(evan, lat, m, inc, h);
    CHECK(t.total == 0.0);
  }
}
