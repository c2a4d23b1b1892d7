// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run with the reference configuration (lambda=1, mu=2,
// omega=2*pi, theta1=theta2=pi/6) unless stated otherwise.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "elgrat/bounds.hpp"
#include "elgrat/dtn.hpp"
#include "elgrat/efficiency.hpp"
#include "elgrat/solver1d.hpp"
#include "elgrat/solver3d.hpp"
#include "test_helpers.hpp"

using namespace elgrat;
using namespace elgrat::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

PmlProfile reference_profile() {
  return make_profile(0.3, 0.3, Complex(25.39, 25.39), 2);
}

CVec3 diffracted_mode0(const ExactFlatSolution& sol, double h) {
  const double a1 = sol.incidence.alpha[0], a2 = sol.incidence.alpha[1];
  const double beta = sol.incidence.beta;
  CVec3 comp, shear;
  comp << a1 * sol.a, a2 * sol.a, beta * sol.a;
  shear << a2 * sol.b[2] - sol.beta2 * sol.b[1],
      sol.beta2 * sol.b[0] - a1 * sol.b[2], a1 * sol.b[1] - a2 * sol.b[0];
  return iu * (comp * std::exp(iu * beta * h) +
               shear * std::exp(iu * sol.beta2 * h));
}

EfficiencyTable exact_efficiencies(const Medium& m, const Incidence& inc,
                                   double h) {
  const ExactFlatSolution sol = exact_flat_solution(inc, m);
  FourierVectorField field;
  field.height = h;
  field.coeffs[{0, 0}] = diffracted_mode0(sol, h);
  const Lattice lat = lattice_of(1.0, 1.0, inc);
  return grating_efficiencies(field, lat, m, inc, h);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double fit_order(const std::vector<double>& h, const std::vector<double>& e) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < h.size(); ++i) {
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(e[i]));
  }
  return fit_line(lx, ly).slope;
}

Outcome criterion1_rigid_boundary() {
  const Medium m = example_medium();
  const Incidence normal = incidence_of(m, 0.0, 0.0);
  const ExactFlatSolution sol = exact_flat_solution(normal, m);
  std::mt19937 rng(0);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
    worst = std::max(worst,
                     eval_exact(sol, Vec3(u(rng), u(rng), 0.0)).norm());
  const EfficiencyTable table = exact_efficiencies(m, normal, 0.3);
  const double e1 = table.e1.at({0, 0});
  const double e2 = table.e2.at({0, 0});
  Outcome out;
  out.pass = worst < 1e-12 && std::abs(e1 - 1.0) < 1e-12 && e2 < 1e-12;
  out.detail = "max |u| on the surface " + sci(worst) + ", |e1(0)-1| = " +
               sci(std::abs(e1 - 1.0));
  return out;
}

Outcome criterion2_energy_conservation() {
  const Medium m = example_medium();
  double worst = energy_balance(exact_efficiencies(m, example_incidence(), 0.3));
  for (int i = 0; i < 10; ++i) {
    const double t1 = 0.03 + 0.14 * i;
    const double t2 = 0.1 + 0.55 * i;
    worst = std::max(
        worst, energy_balance(exact_efficiencies(m, incidence_of(m, t1, t2), 0.3)));
  }
  Outcome out;
  out.pass = worst < 1e-10;
  out.detail = "max |sum(e) - 1| = " + sci(worst);
  return out;
}

Outcome criterion3_dtn_consistency() {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  std::mt19937 rng(0);
  double worst = 0.0;
  for (int n1 = -5; n1 <= 5; ++n1)
    for (int n2 = -5; n2 <= 5; ++n2) {
      const ModeData mode = mode_data(lat, m, {n1, n2});
      const CMat3 mat = dtn_matrix(mode, m);
      for (int t = 0; t < 20; ++t) {
        const PotentialCoefficients pc = random_potentials(mode, rng);
        const CVec3 v = mode_displacement(mode, pc, 0.0);
        const CVec3 direct = traction_from_potentials(mode, m, pc);
        worst = std::max(worst, (mat * v - direct).norm() / v.norm());
      }
    }
  Outcome out;
  out.pass = worst < 1e-10;
  out.detail = "max ||Dv - Mv||/||v|| = " + sci(worst);
  return out;
}

Outcome criterion4_pml_mutual_oracle() {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  double worst = 0.0;
  for (const double sig : {12.0, 25.39, 50.0})
    for (const double delta : {0.15, 0.3, 0.6}) {
      const PmlProfile p = make_profile(0.3, delta, Complex(sig, sig), 2);
      for (int n1 = -5; n1 <= 5; ++n1)
        for (int n2 = -5; n2 <= 5; ++n2) {
          const ModeData mode = mode_data(lat, m, {n1, n2});
          const CMat3 closed = pml_dtn_closed_form(mode, p, m).mhat;
          const CMat3 system = pml_dtn_from_system(mode, p, m).mhat;
          worst = std::max(worst, (closed - system).norm() / system.norm());
        }
    }
  // transcription finding: the quartic-numerator gamma variant does not
  // reproduce the layer-system symbol; the ratio form in production does
  const PmlProfile weak = make_profile(0.3, 0.3, Complex(2.0, 2.0), 2);
  const ModeData mode0 = mode_data(lat, m, {0, 0});
  const PmlDtnMatrix hat = pml_dtn_closed_form(mode0, weak, m);
  const Complex gq = pml_gamma_quartic_variant(mode0, weak);
  const Complex b1 = mode0.beta1, b2 = mode0.beta2;
  const Complex m12_variant =
      hat.mhat(0, 1) + iu * m.mu / (mode0.chi * hat.chihat) * mode0.alpha_n[0] *
                           mode0.alpha_n[1] *
                           (-2.0 * b1 * b2 * (b1 - b2) * (gq - hat.gamma));
  const double variant_gap =
      std::abs(m12_variant - pml_dtn_from_system(mode0, weak, m).mhat(0, 1)) /
      pml_dtn_from_system(mode0, weak, m).mhat.norm();
  Outcome out;
  out.pass = worst < 1e-9;
  out.detail = "max closed-vs-system gap " + sci(worst) +
               "; quartic gamma variant off by " + sci(variant_gap) +
               " (ratio form used)";
  return out;
}

Outcome criterion5_numeric_layer_dtn() {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  const PmlProfile p = reference_profile();
  const ModeData mode0 = mode_data(lat, m, {0, 0});
  const CMat3 closed = pml_dtn_closed_form(mode0, p, m).mhat;
  std::vector<double> hs, errs;
  for (const int ne : {128, 256, 512, 1024}) {
    const Mesh1D mesh{p.start, p.start + p.thickness, ne};
    const CMat3 num = layer_dtn_numeric(mode0, m, p, mesh);
    hs.push_back(mesh.spacing());
    errs.push_back((num - closed).norm() / closed.norm());
  }
  const double order = fit_order(hs, errs);
  Outcome out;
  out.pass = std::abs(order - 2.0) <= 0.3 && errs.back() < 1e-4;
  out.detail = "observed order " + std::to_string(order) + ", error at 1024 " +
               sci(errs.back());
  return out;
}

Outcome criterion6_gap_bound() {
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  const Lattice lat = example_lattice();
  const GapReport rep = operator_gap(lat, m, inc, reference_profile(), 20);
  Outcome out;
  out.pass = rep.bound_satisfied;
  out.detail = "worst gap " + sci(rep.worst_gap) + " at (" +
               std::to_string(rep.worst_mode.n1) + "," +
               std::to_string(rep.worst_mode.n2) + "), bound " +
               sci(rep.Khat);
  return out;
}

Outcome criterion7_exponential_decay() {
  const Medium m = example_medium();
  const Lattice lat = example_lattice();
  std::vector<double> im_zeta, re_zeta, log_sup;
  std::vector<ModeIndex> evanescent;
  for (int n1 = -5; n1 <= 5; ++n1)
    for (int n2 = -5; n2 <= 5; ++n2)
      if (!(n1 == 0 && n2 == 0)) evanescent.push_back({n1, n2});

  ModeIndex worst_evan{1, 0};
  std::vector<double> log_evan;
  for (int k = 0; k < 6; ++k) {
    const double sig = 2.0 * std::pow(1.6, k);
    const PmlProfile p = make_profile(0.3, 0.3, Complex(sig, sig), 2);
    double sup = 0.0, sup_evan = 0.0;
    for (int n1 = -5; n1 <= 5; ++n1)
      for (int n2 = -5; n2 <= 5; ++n2) {
        const ModeData mode = mode_data(lat, m, {n1, n2});
        const double gap =
            (dtn_matrix(mode, m) - pml_dtn_closed_form(mode, p, m).mhat)
                .norm();
        sup = std::max(sup, gap);
        if (!(n1 == 0 && n2 == 0) && gap > sup_evan) {
          sup_evan = gap;
          if (k == 0) worst_evan = {n1, n2};
        }
      }
    im_zeta.push_back(p.zeta().imag());
    re_zeta.push_back(p.zeta().real());
    log_sup.push_back(std::log(sup));
    const ModeData we = mode_data(lat, m, worst_evan);
    log_evan.push_back(std::log(
        (dtn_matrix(we, m) - pml_dtn_closed_form(we, p, m).mhat).norm()));
  }
  const LineFit fit_im = fit_line(im_zeta, log_sup);
  const LineFit fit_re = fit_line(re_zeta, log_evan);
  Outcome out;
  out.pass = fit_im.slope < 0.0 && fit_im.r_squared > 0.99 &&
             fit_re.slope < 0.0 && fit_re.r_squared > 0.99;
  out.detail = "sup fit R^2 " + std::to_string(fit_im.r_squared) +
               " slope " + std::to_string(fit_im.slope) +
               "; evanescent-mode fit R^2 " + std::to_string(fit_re.r_squared);
  return out;
}

Outcome criterion8_full_problem_1d() {
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  const PmlProfile base = reference_profile();
  const ExactFlatSolution exact = exact_flat_solution(inc, m);
  const auto reference = [&](double z) {
    return eval_exact(exact, Vec3(0.0, 0.0, z));
  };

  std::vector<double> hs, errs;
  for (const int ne : {64, 128, 256, 512}) {
    const Mesh1D mesh{0.0, 0.6, ne};
    const auto sol = solve_flat_total_field(inc, m, base, mesh);
    hs.push_back(mesh.spacing());
    errs.push_back(l2_profile_error(mesh, sol, reference, 0.0, 0.3));
  }
  const double order = fit_order(hs, errs);

  const Mesh1D fine{0.0, 0.6, 2048};
  const auto rows =
      pml_convergence_study(inc, m, base, {0.25, 0.5, 1.0, 2.0}, fine);
  const bool decays = rows[0].l2_error > rows[1].l2_error &&
                      rows[1].l2_error > rows[2].l2_error;
  // Floor detection: one more doubling of the strength changes the error by
  // a small factor only, instead of continuing the exponential decay (the
  // 0.5 -> 1.0 step above drops it by ~360x). The floor itself shifts with
  // the strength since a steeper profile costs discretization accuracy, so
  // a small factor rather than a tight band is the meaningful test.
  const bool at_floor = rows[3].l2_error > 0.1 * rows[2].l2_error &&
                        rows[3].l2_error < 3.0 * rows[2].l2_error;
  Outcome out;
  out.pass = std::abs(order - 2.0) <= 0.3 && decays && at_floor;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.3e > %.3e > %.3e ~ %.3e", rows[0].l2_error,
                rows[1].l2_error, rows[2].l2_error, rows[3].l2_error);
  out.detail = "observed order " + std::to_string(order) + "; sweep errors " +
               std::string(buf);
  return out;
}

Outcome criterion9_flat_3d() {
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  const Lattice lat = example_lattice();
  const ExactFlatSolution exact = exact_flat_solution(inc, m);
  const PmlProfile p = reference_profile();

  std::vector<double> hs, errs;
  double energy_dev = 1.0;
  for (const std::array<int, 3> res :
       {std::array<int, 3>{8, 8, 12}, std::array<int, 3>{16, 16, 24},
        std::array<int, 3>{32, 32, 48}}) {
    const HexMesh mesh = build_mesh(Geometry{}, lat, 0.3, 0.3, res, Variant::Pml);
    const Solution3D sol = solve_system(assemble_system(mesh, m, inc, p));
    double acc = 0.0;
    int count = 0;
    for (int i1 = 0; i1 < mesh.n1; ++i1)
      for (int i2 = 0; i2 < mesh.n2; ++i2)
        for (int i3 = 0; i3 <= mesh.trace_level(); ++i3) {
          const Vec3 pos = mesh.node_position(i1, i2, i3);
          acc += (sol.nodal[mesh.node_id(i1, i2, i3)] -
                  eval_exact(exact, pos))
                     .squaredNorm();
          ++count;
        }
    hs.push_back(mesh.dz());
    errs.push_back(std::sqrt(acc / count));

    const FourierVectorField total =
        boundary_mode_coefficients(sol.nodal, mesh, lat, 3);
    const EfficiencyTable table = grating_efficiencies(
        subtract_incident_trace(total, inc), lat, m, inc, 0.3);
    energy_dev = energy_balance(table);
  }
  const double order = fit_order(hs, errs);
  Outcome out;
  out.pass = std::abs(order - 2.0) <= 0.5 && energy_dev < 0.05;
  out.detail = "observed order " + std::to_string(order) +
               ", finest energy deviation " + sci(energy_dev);
  return out;
}

Outcome criterion10_bump_3d() {
  const Medium m = example_medium();
  const Incidence inc = example_incidence();
  const Lattice lat = example_lattice();
  const PmlProfile p = make_profile(0.5, 0.5, Complex(28.57, 28.57), 2);
  Geometry geometry;
  geometry.bumps.push_back({0.2, 0.4, 0.2, 0.4, 0.2});
  geometry.bumps.push_back({0.6, 0.8, 0.6, 0.8, 0.2});

  std::vector<double> deviations;
  for (const int n : {10, 20, 30}) {
    const HexMesh mesh =
        build_mesh(geometry, lat, 0.5, 0.5, {n, n, n}, Variant::Pml);
    const Solution3D sol =
        solve_system(assemble_system(mesh, m, inc, p), 1e-8, 800);
    const FourierVectorField total =
        boundary_mode_coefficients(sol.nodal, mesh, lat, 3);
    const EfficiencyTable table = grating_efficiencies(
        subtract_incident_trace(total, inc), lat, m, inc, 0.5);
    deviations.push_back(energy_balance(table));
  }
  Outcome out;
  out.pass = deviations[0] < 0.1 && deviations[1] < deviations[0] &&
             deviations[2] < deviations[1];
  out.detail = "energy deviations " + sci(deviations[0]) + " > " +
               sci(deviations[1]) + " > " + sci(deviations[2]);
  return out;
}

} // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "rigid-boundary exactness", 1.0, criterion1_rigid_boundary},
      {2, "energy conservation (exact solution)", 1.0,
       criterion2_energy_conservation},
      {3, "transparent-boundary operator consistency", 5.0,
       criterion3_dtn_consistency},
      {4, "layer symbol mutual oracle", 5.0, criterion4_pml_mutual_oracle},
      {5, "numeric layer symbol", 10.0, criterion5_numeric_layer_dtn},
      {6, "symbol gap bound", 5.0, criterion6_gap_bound},
      {7, "exponential layer convergence", 5.0, criterion7_exponential_decay},
      {8, "vertical full-problem convergence", 30.0, criterion8_full_problem_1d},
      {9, "flat 3-d validation", 600.0, criterion9_flat_3d},
      {10, "bump 3-d energy balance", 600.0, criterion10_bump_3d},
  };

  bool all_pass = true;
  for (const Entry& entry : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = entry.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_budget = secs < entry.budget_seconds;
    const bool pass = out.pass && in_budget;
    all_pass = all_pass && pass;
    std::printf("criterion %2d [%s]: %s (%.2f s%s) %s\n", entry.id, entry.name,
                pass ? "PASS" : "FAIL", secs,
                in_budget ? "" : ", over budget", out.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
