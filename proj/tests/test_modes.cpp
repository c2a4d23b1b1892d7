// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>
#include <random>

#include "test_helpers.hpp"

using namespace elgrat;
using namespace elgrat::testing;
namespace nb = std::numbers;

TEST_CASE("medium wavenumbers") {
  const Medium m = example_medium();
  CHECK(m.kappa1 == doctest::Approx(2.0 * nb::pi / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(m.kappa2 == doctest::Approx(2.0 * nb::pi / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(m.kappa1 == doctest::Approx(2.809926).epsilon(1e-6));
  CHECK(m.kappa2 == doctest::Approx(4.442883).epsilon(1e-6));
  CHECK(m.kappa1 < m.kappa2);

  const Medium unit = medium_of(0.0, 1.0, 1.0);
  CHECK(unit.kappa1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(unit.kappa2 == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(medium_of(1.0, -2.0, 1.0), ParameterError);
  CHECK_THROWS_AS(medium_of(-2.0, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(medium_of(1.0, 2.0, 0.0), ParameterError);
}

TEST_CASE("incidence data") {
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  CHECK(inc.alpha[0] == doctest::Approx(1.2167336).epsilon(1e-6));
  CHECK(inc.alpha[1] == doctest::Approx(0.702481).epsilon(1e-6));
  CHECK(inc.beta == doctest::Approx(2.4334672).epsilon(1e-6));
  CHECK(inc.q.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const double lhs = inc.alpha.squaredNorm() + inc.beta * inc.beta;
  CHECK(lhs == doctest::Approx(m.kappa1 * m.kappa1).epsilon(1e-13));

  const Incidence normal = incidence_of(m, 0.0, 1.0);
  CHECK(normal.alpha.norm() == 0.0);
  CHECK(normal.beta == doctest::Approx(m.kappa1).epsilon(1e-14));
  CHECK(normal.q[2] == doctest::Approx(-1.0).epsilon(1e-14));

  CHECK_THROWS_AS(incidence_of(m, nb::pi / 2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(incidence_of(m, -0.1, 0.0), ParameterError);
  CHECK_THROWS_AS(incidence_of(m, 0.1, 2.0 * nb::pi + 0.1), ParameterError);
  CHECK_NOTHROW(incidence_of(m, 0.1, 2.0 * nb::pi));
}

TEST_CASE("per-mode spectral data") {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();

  const ModeData zero = mode_data(lat, m, {0, 0});
  CHECK(zero.beta1.real() == doctest::Approx(2.4334672).epsilon(1e-6));
  CHECK(zero.beta1.imag() == 0.0);
  CHECK(zero.beta2.real() == doctest::Approx(4.214889).epsilon(1e-6));
  CHECK(std::abs(zero.chi) == doctest::Approx(12.2307146).epsilon(1e-5));
  CHECK(zero.propagating1);
  CHECK(zero.propagating2);

  const ModeData one = mode_data(lat, m, {1, 0});
  CHECK(one.beta1.real() == 0.0);
  CHECK(one.beta1.imag() == doctest::Approx(6.98904).epsilon(1e-5));
  CHECK(one.beta2.imag() == doctest::Approx(6.08303).epsilon(1e-5));
  CHECK_FALSE(one.propagating1);
  CHECK_FALSE(one.propagating2);

  const Incidence normal = incidence_of(m, 0.0, 0.0);
  const Lattice nlat = lattice_of(1.0, 1.0, normal);
  const ModeData nzero = mode_data(nlat, m, {0, 0});
  CHECK(rel_err(nzero.beta1, Complex(m.kappa1, 0.0)) < 1e-14);
  CHECK(rel_err(nzero.beta2, Complex(m.kappa2, 0.0)) < 1e-14);
  CHECK(rel_err(nzero.chi, Complex(m.kappa1 * m.kappa2, 0.0)) < 1e-14);
}

TEST_CASE("resonant modes are rejected") {
  const Medium m = example_medium();
  const Incidence normal = incidence_of(m, 0.0, 0.0);
  // period tuned so the (1,0) mode sits exactly on the compressional cutoff
  const Lattice lat = lattice_of(2.0 * nb::pi / m.kappa1,
                                 2.0 * nb::pi / m.kappa1, normal);
  CHECK_THROWS_AS(mode_data(lat, m, {1, 0}), ResonanceError);
  CHECK_NOTHROW(mode_data(lat, m, {2, 0}));
}

TEST_CASE("vertical wavenumber dichotomy and exact branch identity") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Medium m =
        medium_of(0.2 + 2.0 * u(rng), 0.3 + 2.0 * u(rng), 1.0 + 5.0 * u(rng));
    const Incidence inc =
        incidence_of(m, u(rng) * 1.4, u(rng) * 2.0 * nb::pi);
    const Lattice lat = lattice_of(0.5 + u(rng), 0.5 + u(rng), inc);
    for (int n1 = -5; n1 <= 5; ++n1)
      for (int n2 = -5; n2 <= 5; ++n2) {
        ModeData d;
        try {
          d = mode_data(lat, m, {n1, n2});
        } catch (const ResonanceError&) {
          continue;
        }
        for (const Complex beta : {d.beta1, d.beta2}) {
          CHECK(beta.real() >= 0.0);
          CHECK(beta.imag() >= 0.0);
          CHECK(((beta.real() > 0.0) != (beta.imag() > 0.0)));
        }
        const double r2 = d.alpha_n.squaredNorm();
        const double scale1 = std::max(m.kappa1 * m.kappa1, r2);
        const double scale2 = std::max(m.kappa2 * m.kappa2, r2);
        CHECK(std::abs(d.beta1 * d.beta1 + r2 - m.kappa1 * m.kappa1) <
              1e-12 * scale1);
        CHECK(std::abs(d.beta2 * d.beta2 + r2 - m.kappa2 * m.kappa2) <
              1e-12 * scale2);
      }
  }
}

TEST_CASE("chi stays between the squared wavenumbers") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const Medium m =
        medium_of(0.5 + u(rng), 0.5 + u(rng), 2.0 + 4.0 * u(rng));
    const Incidence inc = incidence_of(m, u(rng) * 1.3, u(rng) * 6.0);
    const Lattice lat = lattice_of(1.0, 1.0, inc);
    const double k1sq = m.kappa1 * m.kappa1;
    const double k2sq = m.kappa2 * m.kappa2;
    for (int n1 = -50; n1 <= 50; ++n1)
      for (int n2 = -50; n2 <= 50; ++n2) {
        const ModeData d = mode_data(lat, m, {n1, n2});
        const double c = std::abs(d.chi);
        CHECK(c > k1sq);
        CHECK(c < k2sq);
      }
  }
}

TEST_CASE("propagating sets") {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  const PropagatingSets sets = propagating_sets(lat, m, 3);
  REQUIRE(sets.u1.size() == 1);
  REQUIRE(sets.u2.size() == 1);
  CHECK(sets.u1[0] == ModeIndex{0, 0});
  CHECK(sets.u2[0] == ModeIndex{0, 0});

  // wide-cell surrogate vs brute-force disk count (9.7 avoids putting a
  // lattice ring exactly on the shear cutoff, which 10.0 does)
  const Incidence normal = incidence_of(m, 0.0, 0.0);
  const double cell = 9.7;
  const Lattice wide = lattice_of(cell, cell, normal);
  const PropagatingSets ws = propagating_sets(wide, m, 10);
  size_t count1 = 0, count2 = 0;
  for (int n1 = -10; n1 <= 10; ++n1)
    for (int n2 = -10; n2 <= 10; ++n2) {
      const double r = 2.0 * nb::pi / cell * std::hypot(double(n1), double(n2));
      if (r < m.kappa1) ++count1;
      if (r < m.kappa2) ++count2;
    }
  CHECK(ws.u1.size() == count1);
  CHECK(ws.u2.size() == count2);
  CHECK(ws.u1.size() > 1);

  CHECK_THROWS_AS(propagating_sets(lattice_of(2.0, 2.0, normal), m, 0),
                  ParameterError);
  CHECK_THROWS_AS(propagating_sets(lat, m, -1), ParameterError);
}

TEST_CASE("compressional propagating set is contained in the shear one") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Medium m =
        medium_of(0.5 + u(rng), 0.5 + u(rng), 2.0 + 6.0 * u(rng));
    const Incidence inc = incidence_of(m, u(rng) * 1.2, u(rng) * 6.0);
    const Lattice lat = lattice_of(0.7 + 2.0 * u(rng), 0.7 + 2.0 * u(rng), inc);
    int window = 1;
    PropagatingSets sets;
    for (;; ++window) {
      try {
        sets = propagating_sets(lat, m, window);
        break;
      } catch (const ParameterError&) {
        REQUIRE(window < 64);
      }
    }
    for (const ModeIndex n : sets.u1)
      CHECK(std::find(sets.u2.begin(), sets.u2.end(), n) != sets.u2.end());
  }
}
