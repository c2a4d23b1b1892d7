// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>
#include <random>

#include "elgrat/dtn.hpp"
#include "test_helpers.hpp"

using namespace elgrat;
using namespace elgrat::testing;

TEST_CASE("boundary symbol at normal incidence") {
  const Medium m = example_medium();
  const Incidence normal = incidence_of(m, 0.0, 0.0);
  const Lattice lat = lattice_of(1.0, 1.0, normal);
  const ModeData mode = mode_data(lat, m, {0, 0});
  const CMat3 mat = dtn_matrix(mode, m);
  CHECK(rel_err(mat(0, 0), Complex(0.0, 8.885766)) < 1e-6);
  CHECK(rel_err(mat(1, 1), Complex(0.0, 8.885766)) < 1e-6);
  CHECK(rel_err(mat(2, 2), Complex(0.0, 14.049631)) < 1e-6);
  CHECK(std::abs(mat(0, 1)) + std::abs(mat(0, 2)) + std::abs(mat(1, 0)) +
            std::abs(mat(1, 2)) + std::abs(mat(2, 0)) + std::abs(mat(2, 1)) <
        1e-12);
}

TEST_CASE("boundary symbol structure") {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  for (int n1 = -4; n1 <= 4; n1 += 2)
    for (int n2 = -3; n2 <= 3; n2 += 3) {
      const ModeData mode = mode_data(lat, m, {n1, n2});
      const CMat3 mat = dtn_matrix(mode, m);
      const double scale = mat.norm();
      CHECK(std::abs(mat(0, 1) - mat(1, 0)) < 1e-13 * scale);
      CHECK(std::abs(mat(0, 2) + mat(2, 0)) < 1e-13 * scale);
      CHECK(std::abs(mat(1, 2) + mat(2, 1)) < 1e-13 * scale);
    }
}

TEST_CASE("boundary symbol agrees with the analytic traction") {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  std::mt19937 rng(41);
  for (int n1 = -5; n1 <= 5; ++n1)
    for (int n2 = -5; n2 <= 5; ++n2) {
      const ModeData mode = mode_data(lat, m, {n1, n2});
      const CMat3 mat = dtn_matrix(mode, m);
      for (int t = 0; t < 3; ++t) {
        const PotentialCoefficients pc = random_potentials(mode, rng);
        const CVec3 v = mode_displacement(mode, pc, 0.0);
        const CVec3 direct = traction_from_potentials(mode, m, pc);
        CHECK((mat * v - direct).norm() / v.norm() < 1e-10);
      }
    }
}

TEST_CASE("mode-wise operator application") {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();

  SUBCASE("zero field maps to zero") {
    FourierVectorField zero;
    zero.height = 0.3;
    zero.coeffs[{0, 0}] = CVec3::Zero();
    const FourierVectorField out = apply_dtn(zero, lat, m);
    CHECK(out.coeffs.at({0, 0}).norm() == 0.0);
  }

  SUBCASE("normal-incidence vertical datum") {
    const Incidence normal = incidence_of(m, 0.0, 0.0);
    const Lattice nlat = lattice_of(1.0, 1.0, normal);
    FourierVectorField field;
    field.height = 0.3;
    field.coeffs[{0, 0}] = CVec3(0.0, 0.0, 1.0);
    const CVec3 out = apply_dtn(field, nlat, m).coeffs.at({0, 0});
    CHECK(rel_err(out, CVec3(0.0, 0.0, Complex(0.0, 14.049631))) < 1e-6);
  }

  SUBCASE("superposition") {
    std::mt19937 rng(43);
    FourierVectorField a, b, sum;
    a.height = b.height = sum.height = 0.3;
    a.coeffs[{1, 0}] = random_cvec3(rng);
    b.coeffs[{0, 2}] = random_cvec3(rng);
    sum.coeffs = a.coeffs;
    sum.coeffs[{0, 2}] = b.coeffs.at({0, 2});
    const auto oa = apply_dtn(a, lat, m);
    const auto ob = apply_dtn(b, lat, m);
    const auto os = apply_dtn(sum, lat, m);
    CHECK(rel_err(os.coeffs.at({1, 0}), oa.coeffs.at({1, 0})) < 1e-14);
    CHECK(rel_err(os.coeffs.at({0, 2}), ob.coeffs.at({0, 2})) < 1e-14);
  }
}

TEST_CASE("incident-field boundary source") {
  const Medium m = example_medium();
  const double h = 0.3;

  SUBCASE("normal incidence closed form") {
    const Incidence normal = incidence_of(m, 0.0, 0.0);
    const BoundarySource g = boundary_source_g(normal, m, h);
    const double om2 = m.omega * m.omega;
    const Complex expect =
        2.0 * iu * om2 / m.kappa1 * std::exp(-iu * m.kappa1 * h);
    CHECK(std::abs(g.g0[0]) < 1e-12);
    CHECK(std::abs(g.g0[1]) < 1e-12);
    CHECK(rel_err(g.g0[2], expect) < 1e-13);
    CHECK(std::abs(2.0 * om2 / m.kappa1 - 28.099) < 1e-3);
  }

  SUBCASE("closed form equals operator route") {
    const Incidence inc = example_incidence();
    const Lattice lat = example_lattice();
    const ModeData mode0 = mode_data(lat, m, {0, 0});
    const CVec3 trace = inc.q.cast<Complex>() * std::exp(-iu * inc.beta * h);
    const CVec3 direct =
        incident_traction(inc, m, h) - dtn_matrix(mode0, m) * trace;
    const BoundarySource g = boundary_source_g(inc, m, h);
    CHECK(rel_err(g.g0, direct) < 1e-12);
  }
}
