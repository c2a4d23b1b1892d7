// SPDX-License-Identifier: Apache-2.0
//
// Batch experiment driver. Every subcommand reads a flat key = value
// configuration, writes CSV tables plus a summary.json echoing the inputs,
// and exits with 0 (ok), 2 (config error), 3 (numerical failure), or
// 4 (bound violation detected).
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "elgrat/bounds.hpp"
#include "elgrat/config.hpp"
#include "elgrat/dtn.hpp"
#include "elgrat/efficiency.hpp"
#include "elgrat/solver1d.hpp"
#include "elgrat/solver3d.hpp"

using namespace elgrat;
using nlohmann::json;

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir = "out";
  int seed = 0;
  RunConfig cfg;
  json summary;

  std::ofstream csv(const std::string& name) const {
    std::ofstream out(std::filesystem::path(out_dir) / name);
    out << std::setprecision(16) << std::scientific;
    return out;
  }
};

json config_json(const RunConfig& c) {
  json j;
  j["medium.lambda"] = c.lambda;
  j["medium.mu"] = c.mu;
  j["medium.omega"] = c.omega;
  j["incidence.theta1"] = c.theta1;
  j["incidence.theta2"] = c.theta2;
  j["lattice.period1"] = c.period1;
  j["lattice.period2"] = c.period2;
  j["surface.h"] = c.h;
  j["pml.delta"] = c.pml_delta;
  j["pml.sigma_re"] = c.sigma_re;
  j["pml.sigma_im"] = c.sigma_im;
  j["pml.degree"] = c.pml_degree;
  j["modes.window"] = c.mode_window;
  j["solver.variant"] = c.variant;
  j["solver.truncation"] = c.dtn_truncation;
  j["solver.tolerance"] = c.solver_tol;
  j["solver.max_iterations"] = c.solver_max_iter;
  j["solver.elements_1d"] = c.elements_1d;
  j["bounds.gamma1"] = c.assumed_gamma1;
  j["sweep.scalings"] = c.sigma_scalings;
  json res = json::array();
  for (const auto& r : c.resolutions) res.push_back({r[0], r[1], r[2]});
  j["mesh.resolutions"] = res;
  json bumps = json::array();
  for (const auto& b : c.bumps)
    bumps.push_back({b.x1_lo, b.x1_hi, b.x2_lo, b.x2_hi, b.height});
  j["surface.bumps"] = bumps;
  return j;
}

void write_summary(Cli& cli, const std::string& subcommand) {
  cli.summary["subcommand"] = subcommand;
  cli.summary["seed"] = cli.seed;
  cli.summary["config"] = config_json(cli.cfg);
  std::ofstream out(std::filesystem::path(cli.out_dir) / "summary.json");
  out << cli.summary.dump(2) << "\n";
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

void write_efficiency_csv(Cli& cli, const std::string& name,
                          const EfficiencyTable& table) {
  auto out = cli.csv(name);
  out << "n1,n2,e1,e2\n";
  for (const auto& [n, e1] : table.e1) {
    const auto it2 = table.e2.find(n);
    out << n.n1 << "," << n.n2 << "," << e1 << ","
        << (it2 == table.e2.end() ? 0.0 : it2->second) << "\n";
  }
  for (const auto& [n, e2] : table.e2)
    if (!table.e1.count(n))
      out << n.n1 << "," << n.n2 << "," << 0.0 << "," << e2 << "\n";
  out << "total,," << table.total << ",\n";
}

int run_modes(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Lattice lat = cli.cfg.lattice();
  const int w = cli.cfg.mode_window;
  auto out = cli.csv("modes.csv");
  out << "n1,n2,alpha1,alpha2,beta1_re,beta1_im,beta2_re,beta2_im,"
         "chi_re,chi_im,delta1,delta2,prop1,prop2\n";
  for (int n1 = -w; n1 <= w; ++n1)
    for (int n2 = -w; n2 <= w; ++n2) {
      const ModeData d = mode_data(lat, m, {n1, n2});
      out << n1 << "," << n2 << "," << d.alpha_n[0] << "," << d.alpha_n[1]
          << "," << d.beta1.real() << "," << d.beta1.imag() << ","
          << d.beta2.real() << "," << d.beta2.imag() << "," << d.chi.real()
          << "," << d.chi.imag() << "," << d.delta1 << "," << d.delta2 << ","
          << d.propagating1 << "," << d.propagating2 << "\n";
    }
  const PropagatingSets sets = propagating_sets(lat, m, w);
  cli.summary["propagating_compressional"] = sets.u1.size();
  cli.summary["propagating_shear"] = sets.u2.size();
  cli.summary["kappa1"] = m.kappa1;
  cli.summary["kappa2"] = m.kappa2;
  return 0;
}

int run_exact(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Incidence inc = cli.cfg.incidence();
  const Lattice lat = cli.cfg.lattice();
  const double h = cli.cfg.h;
  const ExactFlatSolution sol = exact_flat_solution(inc, m);

  std::mt19937 rng(cli.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_surface = 0.0;
  for (int i = 0; i < 100; ++i)
    worst_surface = std::max(
        worst_surface, eval_exact(sol, Vec3(u(rng), u(rng), 0.0)).norm());

  FourierVectorField field;
  field.height = h;
  field.coeffs[{0, 0}] = diffracted_mode0(sol, h);
  const EfficiencyTable table = grating_efficiencies(field, lat, m, inc, h);
  write_efficiency_csv(cli, "efficiencies.csv", table);

  cli.summary["a_re"] = sol.a.real();
  cli.summary["a_im"] = sol.a.imag();
  cli.summary["rigid_boundary_residual"] = worst_surface;
  cli.summary["energy_total"] = table.total;
  cli.summary["energy_deviation"] = energy_balance(table);
  std::cout << "energy total " << std::setprecision(16) << table.total
            << " (deviation " << energy_balance(table) << ")\n";
  return 0;
}

int run_dtn_check(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Lattice lat = cli.cfg.lattice();
  std::mt19937 rng(cli.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto out = cli.csv("dtn_check.csv");
  out << "n1,n2,worst_residual\n";
  double worst = 0.0;
  for (int n1 = -5; n1 <= 5; ++n1)
    for (int n2 = -5; n2 <= 5; ++n2) {
      const ModeData mode = mode_data(lat, m, {n1, n2});
      const CMat3 mat = dtn_matrix(mode, m);
      double mode_worst = 0.0;
      for (int t = 0; t < 20; ++t) {
        PotentialCoefficients pc;
        pc.phi = Complex(u(rng), u(rng));
        const double a1 = mode.alpha_n[0], a2 = mode.alpha_n[1];
        CVec3 k1, k2;
        if (std::abs(a1) + std::abs(a2) < 1e-14) {
          k1 << 1, 0, 0;
          k2 << 0, 1, 0;
        } else {
          k1 << a2, -a1, 0.0;
          k2 << mode.beta2, 0.0, -a1;
          if (std::abs(a1) < 1e-14) k2 << 0.0, mode.beta2, -a2;
        }
        pc.psi = Complex(u(rng), u(rng)) * k1 + Complex(u(rng), u(rng)) * k2;
        const CVec3 v = mode_displacement(mode, pc, 0.0);
        const CVec3 direct = traction_from_potentials(mode, m, pc);
        mode_worst = std::max(mode_worst,
                              (mat * v - direct).norm() / v.norm());
      }
      out << n1 << "," << n2 << "," << mode_worst << "\n";
      worst = std::max(worst, mode_worst);
    }
  cli.summary["max_residual"] = worst;
  std::cout << "max operator consistency residual " << worst << "\n";
  return 0;
}

int run_pml_check(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Lattice lat = cli.cfg.lattice();
  const Complex sigma(cli.cfg.sigma_re, cli.cfg.sigma_im);
  auto out = cli.csv("pml_check.csv");
  out << "sigma_scale,delta_scale,worst_gap\n";
  double worst = 0.0;
  for (const double ss : {0.5, 1.0, 2.0})
    for (const double ds : {0.5, 1.0, 2.0}) {
      const PmlProfile p = make_profile(cli.cfg.h, ds * cli.cfg.pml_delta,
                                        ss * sigma, cli.cfg.pml_degree);
      double grid_worst = 0.0;
      for (int n1 = -5; n1 <= 5; ++n1)
        for (int n2 = -5; n2 <= 5; ++n2) {
          const ModeData mode = mode_data(lat, m, {n1, n2});
          const CMat3 closed = pml_dtn_closed_form(mode, p, m).mhat;
          const CMat3 system = pml_dtn_from_system(mode, p, m).mhat;
          grid_worst =
              std::max(grid_worst, (closed - system).norm() / system.norm());
        }
      out << ss << "," << ds << "," << grid_worst << "\n";
      worst = std::max(worst, grid_worst);
    }

  // alternate quartic-numerator gamma auxiliary, kept as a diagnostic
  const PmlProfile weak =
      make_profile(cli.cfg.h, cli.cfg.pml_delta, 0.1 * sigma,
                   cli.cfg.pml_degree);
  const ModeData mode0 = mode_data(lat, m, {0, 0});
  const PmlDtnMatrix hat = pml_dtn_closed_form(mode0, weak, m);
  const double variant_gap =
      std::abs(pml_gamma_quartic_variant(mode0, weak) - hat.gamma);

  cli.summary["max_cross_check_gap"] = worst;
  cli.summary["gamma_quartic_variant_gap"] = variant_gap;
  std::cout << "max closed-form vs layer-system gap " << worst << "\n";
  if (worst > 1e-9)
    std::cout << "finding: closed-form entries disagree with the layer "
                 "system beyond 1e-9; the system route is authoritative\n";
  else
    std::cout << "closed form and layer system agree to 1e-9; quartic gamma "
                 "variant would be off by "
              << variant_gap << "\n";
  return 0;
}

int run_bounds(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Incidence inc = cli.cfg.incidence();
  const Lattice lat = cli.cfg.lattice();
  const PmlProfile p = cli.cfg.profile();
  const int w = cli.cfg.mode_window;

  const GapReport rep =
      operator_gap(lat, m, inc, p, w, 0.0, cli.cfg.assumed_gamma1);
  auto out = cli.csv("gap.csv");
  out << "n1,n2,gap\n";
  for (int n1 = -w; n1 <= w; ++n1)
    for (int n2 = -w; n2 <= w; ++n2) {
      const ModeData mode = mode_data(lat, m, {n1, n2});
      out << n1 << "," << n2 << ","
          << (dtn_matrix(mode, m) - pml_dtn_closed_form(mode, p, m).mhat)
                 .norm()
          << "\n";
    }

  const PropositionReport props = proposition_checks(
      m, lat, inc, w, {{1.0, 0.0}, {3.0, 7.0}, {0.5, 2.0}, {2.0, 5.0}});

  cli.summary["K"] = rep.K;
  cli.summary["Khat"] = rep.Khat;
  cli.summary["Khat_mu_squared"] = rep.Khat_mu_squared;
  cli.summary["Khat_sqrt116"] = rep.Khat_sqrt116;
  cli.summary["gamma2"] = rep.gamma2;
  cli.summary["worst_gap"] = rep.worst_gap;
  cli.summary["worst_mode"] = {rep.worst_mode.n1, rep.worst_mode.n2};
  cli.summary["bound_satisfied"] = rep.bound_satisfied;
  cli.summary["condition_margin"] = rep.condition_margin;
  cli.summary["chi_bounds_hold"] = props.chi_bounds_hold;
  cli.summary["envelope_holds"] = props.envelope_holds;
  cli.summary["re_zeta_at_least_one"] = p.re_zeta_at_least_one();
  if (!p.re_zeta_at_least_one())
    std::cout << "warning: Re zeta = " << p.zeta().real()
              << " < 1; the gap constants assume Re zeta >= 1\n";
  std::cout << "K = " << rep.K << ", Khat = " << rep.Khat
            << ", gamma2 = " << rep.gamma2 << ", worst gap = " << rep.worst_gap
            << (rep.bound_satisfied ? " (bound satisfied)\n"
                                    : " (BOUND VIOLATED)\n");
  return rep.bound_satisfied && props.chi_bounds_hold && props.envelope_holds
             ? 0
             : 4;
}

int run_solve1d(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Incidence inc = cli.cfg.incidence();
  const PmlProfile p = cli.cfg.profile();
  const double top = p.start + p.thickness;
  const ExactFlatSolution exact = exact_flat_solution(inc, m);
  const auto reference = [&](double z) {
    return eval_exact(exact, Vec3(0.0, 0.0, z));
  };

  auto out = cli.csv("solve1d.csv");
  out << "elements,spacing,l2_error\n";
  std::vector<double> hs, errs;
  for (int ne = std::max(8, cli.cfg.elements_1d / 8); ne <= cli.cfg.elements_1d;
       ne *= 2) {
    const Mesh1D mesh{0.0, top, ne};
    const auto sol = solve_flat_total_field(inc, m, p, mesh);
    const double err = l2_profile_error(mesh, sol, reference, 0.0, p.start);
    out << ne << "," << mesh.spacing() << "," << err << "\n";
    hs.push_back(std::log(mesh.spacing()));
    errs.push_back(std::log(err));
  }
  const LineFit fit = fit_line(hs, errs);

  const Lattice lat = cli.cfg.lattice();
  const ModeData mode0 = mode_data(lat, m, {0, 0});
  const Mesh1D layer_mesh{p.start, top, cli.cfg.elements_1d};
  const CMat3 numeric = layer_dtn_numeric(mode0, m, p, layer_mesh);
  const CMat3 closed = pml_dtn_closed_form(mode0, p, m).mhat;

  cli.summary["observed_order"] = fit.slope;
  cli.summary["layer_symbol_error"] = (numeric - closed).norm() / closed.norm();
  std::cout << "observed order " << fit.slope << ", layer symbol error "
            << (numeric - closed).norm() / closed.norm() << "\n";
  return 0;
}

int run_solve3d(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Incidence inc = cli.cfg.incidence();
  const Lattice lat = cli.cfg.lattice();
  const PmlProfile p = cli.cfg.profile();
  const Geometry geometry = cli.cfg.geometry();
  const Variant variant = cli.cfg.variant_kind();
  const bool flat = geometry.flat();
  const ExactFlatSolution exact = exact_flat_solution(inc, m);

  auto out = cli.csv("solve3d.csv");
  // wall time goes to stdout only, keeping reruns byte-identical
  out << "n1,n2,n3,unknowns,method,iterations,residual,"
         "energy_deviation,l2_error_vs_exact\n";
  EfficiencyTable last_table;
  const HexMesh* last_mesh = nullptr;
  std::vector<HexMesh> meshes;
  std::vector<Solution3D> solutions;
  for (const auto& res : cli.cfg.resolutions) {
    const HexMesh mesh = build_mesh(geometry, lat, cli.cfg.h, cli.cfg.pml_delta,
                                    res, variant);
    const AssembledSystem sys =
        assemble_system(mesh, m, inc, p, cli.cfg.dtn_truncation);
    const Solution3D sol =
        solve_system(sys, cli.cfg.solver_tol, cli.cfg.solver_max_iter);

    const int window = std::min(3, (std::min(res[0], res[1]) - 1) / 2);
    const FourierVectorField total =
        boundary_mode_coefficients(sol.nodal, mesh, lat, window);
    const EfficiencyTable table = grating_efficiencies(
        subtract_incident_trace(total, inc), lat, m, inc, cli.cfg.h);

    double l2err = -1.0;
    if (flat) {
      double acc = 0.0;
      int count = 0;
      for (int i1 = 0; i1 < mesh.n1; ++i1)
        for (int i2 = 0; i2 < mesh.n2; ++i2)
          for (int i3 = 0; i3 <= mesh.trace_level(); ++i3) {
            acc += (sol.nodal[mesh.node_id(i1, i2, i3)] -
                    eval_exact(exact, mesh.node_position(i1, i2, i3)))
                       .squaredNorm();
            ++count;
          }
      l2err = std::sqrt(acc / count);
    }
    out << res[0] << "," << res[1] << "," << res[2] << ","
        << sol.report.unknowns << "," << sol.report.method << ","
        << sol.report.iterations << "," << sol.report.relative_residual << ","
        << energy_balance(table) << "," << l2err << "\n";
    std::cout << "resolution " << res[0] << "x" << res[1] << "x" << res[2]
              << ": " << sol.report.method << ", " << sol.report.seconds
              << " s\n";
    last_table = table;
    meshes.push_back(mesh);
    solutions.push_back(std::move(sol));
    last_mesh = &meshes.back();
  }
  write_efficiency_csv(cli, "efficiencies.csv", last_table);

  // columnar dump of the finest solution for external visualization:
  // x1 x2 x3 then re/im of the three displacement components
  if (last_mesh) {
    auto dump = cli.csv("solution.csv");
    dump << "x1,x2,x3,u1_re,u1_im,u2_re,u2_im,u3_re,u3_im\n";
    const Solution3D& sol = solutions.back();
    for (int i1 = 0; i1 <= last_mesh->n1; ++i1)
      for (int i2 = 0; i2 <= last_mesh->n2; ++i2)
        for (int i3 = 0; i3 <= last_mesh->n3; ++i3) {
          const Vec3 x = last_mesh->node_position(i1, i2, i3);
          const CVec3& u = sol.nodal[last_mesh->node_id(i1, i2, i3)];
          dump << x[0] << "," << x[1] << "," << x[2];
          for (int c = 0; c < 3; ++c)
            dump << "," << u[c].real() << "," << u[c].imag();
          dump << "\n";
        }
  }
  cli.summary["energy_deviation"] = energy_balance(last_table);
  std::cout << "finest energy deviation " << energy_balance(last_table)
            << "\n";
  return 0;
}

int run_sweep(Cli& cli) {
  const Medium m = cli.cfg.medium();
  const Incidence inc = cli.cfg.incidence();
  const PmlProfile base = cli.cfg.profile();
  const Mesh1D mesh{0.0, base.start + base.thickness, cli.cfg.elements_1d};
  const auto rows =
      pml_convergence_study(inc, m, base, cli.cfg.sigma_scalings, mesh);
  auto out = cli.csv("sweep.csv");
  out << "scale,re_zeta,im_zeta,l2_error\n";
  json jrows = json::array();
  for (const SweepRow& r : rows) {
    out << r.scale << "," << r.re_zeta << "," << r.im_zeta << ","
        << r.l2_error << "\n";
    jrows.push_back({r.scale, r.l2_error});
  }
  cli.summary["sweep"] = jrows;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"elastic biperiodic grating solver"};
  app.require_subcommand(1);
  Cli cli;
  app.add_option("--config", cli.config_path, "path to key = value run file");
  app.add_option("--out", cli.out_dir, "output directory");
  app.add_option("--seed", cli.seed, "seed for randomized checks");
  app.fallthrough();

  std::map<std::string, std::function<int(Cli&)>> commands = {
      {"modes", run_modes},     {"exact", run_exact},
      {"dtn-check", run_dtn_check}, {"pml-check", run_pml_check},
      {"bounds", run_bounds},   {"solve1d", run_solve1d},
      {"solve3d", run_solve3d}, {"sweep", run_sweep},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2; // usage problems are configuration errors
  }
  const std::string chosen = app.get_subcommands().front()->get_name();

  try {
    cli.cfg = cli.config_path.empty() ? RunConfig{}
                                      : parse_config_file(cli.config_path);
    std::filesystem::create_directories(cli.out_dir);
    const int status = commands.at(chosen)(cli);
    write_summary(cli, chosen);
    if (status == 4) std::cerr << "error: bound-violation\n";
    return status;
  } catch (const ParameterError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
}
