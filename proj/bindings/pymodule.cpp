// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elgrat/bounds.hpp"
#include "elgrat/dtn.hpp"
#include "elgrat/efficiency.hpp"
#include "elgrat/solver1d.hpp"
#include "elgrat/solver3d.hpp"

namespace py = pybind11;
using namespace elgrat;

namespace {

using PyModeKey = std::pair<int, int>;

FourierVectorField field_from_py(
    const std::map<PyModeKey, CVec3>& coeffs, double height) {
  FourierVectorField field;
  field.height = height;
  for (const auto& [k, v] : coeffs) field.coeffs[{k.first, k.second}] = v;
  return field;
}

std::map<PyModeKey, CVec3> field_to_py(const FourierVectorField& field) {
  std::map<PyModeKey, CVec3> out;
  for (const auto& [n, v] : field.coeffs) out[{n.n1, n.n2}] = v;
  return out;
}

} // namespace

PYBIND11_MODULE(elgrat, m) {
  m.doc() = "elastic wave scattering by biperiodic rigid gratings: "
            "transparent-boundary and absorbing-layer operators, vertical "
            "mode solves, and structured 3-d finite elements";

  py::register_exception<ParameterError>(m, "ParameterError",
                                         PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);

  py::class_<Medium>(m, "Medium")
      .def_readonly("lam", &Medium::lambda)
      .def_readonly("mu", &Medium::mu)
      .def_readonly("omega", &Medium::omega)
      .def_readonly("kappa1", &Medium::kappa1)
      .def_readonly("kappa2", &Medium::kappa2);
  m.def("medium_of", &medium_of, py::arg("lam"), py::arg("mu"),
        py::arg("omega"));

  py::class_<Incidence>(m, "Incidence")
      .def_readonly("theta1", &Incidence::theta1)
      .def_readonly("theta2", &Incidence::theta2)
      .def_readonly("alpha", &Incidence::alpha)
      .def_readonly("beta", &Incidence::beta)
      .def_readonly("q", &Incidence::q);
  m.def("incidence_of", &incidence_of, py::arg("medium"), py::arg("theta1"),
        py::arg("theta2"));

  py::class_<Lattice>(m, "Lattice")
      .def_readonly("period1", &Lattice::period1)
      .def_readonly("period2", &Lattice::period2)
      .def_readonly("alpha", &Lattice::alpha);
  m.def("lattice_of", &lattice_of, py::arg("period1"), py::arg("period2"),
        py::arg("incidence"));

  py::class_<ModeData>(m, "ModeData")
      .def_readonly("alpha_n", &ModeData::alpha_n)
      .def_readonly("beta1", &ModeData::beta1)
      .def_readonly("beta2", &ModeData::beta2)
      .def_readonly("chi", &ModeData::chi)
      .def_readonly("delta1", &ModeData::delta1)
      .def_readonly("delta2", &ModeData::delta2)
      .def_readonly("propagating1", &ModeData::propagating1)
      .def_readonly("propagating2", &ModeData::propagating2);
  m.def(
      "mode_data",
      [](const Lattice& lat, const Medium& med, int n1, int n2) {
        return mode_data(lat, med, {n1, n2});
      },
      py::arg("lattice"), py::arg("medium"), py::arg("n1"), py::arg("n2"));
  m.def(
      "propagating_sets",
      [](const Lattice& lat, const Medium& med, int window) {
        const PropagatingSets sets = propagating_sets(lat, med, window);
        std::vector<PyModeKey> u1, u2;
        for (const ModeIndex n : sets.u1) u1.push_back({n.n1, n.n2});
        for (const ModeIndex n : sets.u2) u2.push_back({n.n1, n.n2});
        return std::make_pair(u1, u2);
      },
      py::arg("lattice"), py::arg("medium"), py::arg("window"));

  m.def("incident_field", &incident_field, py::arg("incidence"),
        py::arg("medium"), py::arg("x"));

  py::class_<PotentialCoefficients>(m, "PotentialCoefficients")
      .def(py::init([](Complex phi, const CVec3& psi) {
             return PotentialCoefficients{phi, psi};
           }),
           py::arg("phi"), py::arg("psi"))
      .def_readonly("phi", &PotentialCoefficients::phi)
      .def_readonly("psi", &PotentialCoefficients::psi);
  m.def("helmholtz_coefficients", &helmholtz_coefficients, py::arg("mode"),
        py::arg("medium"), py::arg("v"));
  m.def("mode_displacement", &mode_displacement, py::arg("mode"),
        py::arg("coefficients"), py::arg("dx3"));

  py::class_<ExactFlatSolution>(m, "ExactFlatSolution")
      .def_readonly("a", &ExactFlatSolution::a)
      .def_readonly("b", &ExactFlatSolution::b)
      .def_readonly("beta2", &ExactFlatSolution::beta2);
  m.def("exact_flat_solution", &exact_flat_solution, py::arg("incidence"),
        py::arg("medium"));
  m.def("eval_exact", &eval_exact, py::arg("solution"), py::arg("x"));

  m.def("dtn_matrix", &dtn_matrix, py::arg("mode"), py::arg("medium"));
  m.def("traction_from_potentials", &traction_from_potentials, py::arg("mode"),
        py::arg("medium"), py::arg("coefficients"));
  m.def(
      "apply_dtn",
      [](const std::map<PyModeKey, CVec3>& coeffs, double height,
         const Lattice& lat, const Medium& med) {
        return field_to_py(apply_dtn(field_from_py(coeffs, height), lat, med));
      },
      py::arg("coeffs"), py::arg("height"), py::arg("lattice"),
      py::arg("medium"));

  py::class_<BoundarySource>(m, "BoundarySource")
      .def_readonly("g0", &BoundarySource::g0)
      .def_readonly("phase", &BoundarySource::phase);
  m.def("boundary_source_g", &boundary_source_g, py::arg("incidence"),
        py::arg("medium"), py::arg("h"));
  m.def("incident_traction", &incident_traction, py::arg("incidence"),
        py::arg("medium"), py::arg("h"));

  py::class_<PmlProfile>(m, "PmlProfile")
      .def_readonly("start", &PmlProfile::start)
      .def_readonly("thickness", &PmlProfile::thickness)
      .def_readonly("sigma", &PmlProfile::sigma)
      .def_readonly("degree", &PmlProfile::degree)
      .def("rho", &PmlProfile::rho)
      .def("zeta", &PmlProfile::zeta)
      .def("zeta_at", &PmlProfile::zeta_at)
      .def("absorbing", &PmlProfile::absorbing);
  m.def("make_profile", &make_profile, py::arg("start"), py::arg("thickness"),
        py::arg("sigma"), py::arg("degree") = 2);

  m.def(
      "layer_system",
      [](const ModeData& mode, const PmlProfile& p) {
        return Eigen::MatrixXcd(layer_system(mode, p).matrix);
      },
      py::arg("mode"), py::arg("profile"));

  py::class_<PmlDtnMatrix>(m, "PmlDtnMatrix")
      .def_readonly("mhat", &PmlDtnMatrix::mhat)
      .def_readonly("epsilon", &PmlDtnMatrix::epsilon)
      .def_readonly("theta", &PmlDtnMatrix::theta)
      .def_readonly("eta", &PmlDtnMatrix::eta)
      .def_readonly("gamma", &PmlDtnMatrix::gamma)
      .def_readonly("chihat", &PmlDtnMatrix::chihat);
  m.def("pml_dtn_from_system", &pml_dtn_from_system, py::arg("mode"),
        py::arg("profile"), py::arg("medium"));
  m.def("pml_dtn_closed_form", &pml_dtn_closed_form, py::arg("mode"),
        py::arg("profile"), py::arg("medium"));
  m.def("pml_source_g", &pml_source_g, py::arg("incidence"), py::arg("medium"),
        py::arg("profile"));

  m.def("modeling_constant_K", &modeling_constant_K, py::arg("medium"),
        py::arg("incidence"), py::arg("lattice"), py::arg("profile"),
        py::arg("window"));
  py::class_<GapReport>(m, "GapReport")
      .def_readonly("K", &GapReport::K)
      .def_readonly("Khat", &GapReport::Khat)
      .def_readonly("gamma2", &GapReport::gamma2)
      .def_readonly("worst_gap", &GapReport::worst_gap)
      .def_readonly("bound_satisfied", &GapReport::bound_satisfied)
      .def_readonly("condition_margin", &GapReport::condition_margin);
  m.def("operator_gap", &operator_gap, py::arg("lattice"), py::arg("medium"),
        py::arg("incidence"), py::arg("profile"), py::arg("window"),
        py::arg("a_floor") = 0.0, py::arg("assumed_gamma1") = 1.0);

  py::class_<Mesh1D>(m, "Mesh1D")
      .def(py::init([](double lo, double hi, int elements) {
             return Mesh1D{lo, hi, elements};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("elements"))
      .def_readonly("lo", &Mesh1D::lo)
      .def_readonly("hi", &Mesh1D::hi)
      .def_readonly("elements", &Mesh1D::elements)
      .def("spacing", &Mesh1D::spacing)
      .def("node", &Mesh1D::node);
  m.def("solve_mode_bvp", &solve_mode_bvp, py::arg("mode"), py::arg("medium"),
        py::arg("profile"), py::arg("mesh"), py::arg("bc_lo"),
        py::arg("bc_hi"), py::arg("volume_source") = nullptr,
        py::arg("quadrature_points") = 3);
  m.def("layer_dtn_numeric", &layer_dtn_numeric, py::arg("mode"),
        py::arg("medium"), py::arg("profile"), py::arg("layer_mesh"));
  m.def("solve_flat_total_field", &solve_flat_total_field,
        py::arg("incidence"), py::arg("medium"), py::arg("profile"),
        py::arg("mesh"));
  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("scale", &SweepRow::scale)
      .def_readonly("re_zeta", &SweepRow::re_zeta)
      .def_readonly("im_zeta", &SweepRow::im_zeta)
      .def_readonly("l2_error", &SweepRow::l2_error);
  m.def("pml_convergence_study", &pml_convergence_study, py::arg("incidence"),
        py::arg("medium"), py::arg("base_profile"), py::arg("scalings"),
        py::arg("mesh"));

  py::class_<Geometry>(m, "Geometry")
      .def(py::init([](const std::vector<std::array<double, 5>>& boxes) {
             Geometry g;
             for (const auto& b : boxes)
               g.bumps.push_back({b[0], b[1], b[2], b[3], b[4]});
             return g;
           }),
           py::arg("bumps") = std::vector<std::array<double, 5>>{})
      .def("flat", &Geometry::flat);
  py::enum_<Variant>(m, "Variant")
      .value("Dtn", Variant::Dtn)
      .value("Pml", Variant::Pml);
  py::class_<HexMesh>(m, "HexMesh")
      .def_readonly("n1", &HexMesh::n1)
      .def_readonly("n2", &HexMesh::n2)
      .def_readonly("n3", &HexMesh::n3)
      .def_readonly("free_node_count", &HexMesh::free_node_count)
      .def("node_count", &HexMesh::node_count)
      .def("trace_level", &HexMesh::trace_level);
  m.def(
      "build_mesh",
      [](const Geometry& g, const Lattice& lat, double h, double delta,
         std::array<int, 3> resolution, Variant variant) {
        return build_mesh(g, lat, h, delta, resolution, variant);
      },
      py::arg("geometry"), py::arg("lattice"), py::arg("h"), py::arg("delta"),
      py::arg("resolution"), py::arg("variant"));

  py::class_<AssembleOptions>(m, "AssembleOptions")
      .def(py::init<>())
      .def_readwrite("include_mass", &AssembleOptions::include_mass)
      .def_readwrite("lift_dirichlet", &AssembleOptions::lift_dirichlet)
      .def_readwrite("include_boundary_term",
                     &AssembleOptions::include_boundary_term);
  py::class_<AssembledSystem>(m, "AssembledSystem")
      .def_property_readonly("unknowns", &AssembledSystem::unknowns);
  m.def("assemble_system", &assemble_system, py::arg("mesh"),
        py::arg("medium"), py::arg("incidence"), py::arg("profile"),
        py::arg("dtn_truncation") = 5,
        py::arg("options") = AssembleOptions{});

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("method", &SolveReport::method)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("relative_residual", &SolveReport::relative_residual)
      .def_readonly("seconds", &SolveReport::seconds)
      .def_readonly("unknowns", &SolveReport::unknowns);
  py::class_<Solution3D>(m, "Solution3D")
      .def_readonly("report", &Solution3D::report)
      .def_property_readonly("nodal", [](const Solution3D& sol) {
        Eigen::MatrixXcd out(sol.nodal.size(), 3);
        for (size_t i = 0; i < sol.nodal.size(); ++i)
          out.row(i) = sol.nodal[i].transpose();
        return out;
      });
  m.def("solve_system", &solve_system, py::arg("system"),
        py::arg("tol") = 1e-8, py::arg("max_iter") = 400);
  m.def(
      "boundary_mode_coefficients",
      [](const Eigen::MatrixXcd& nodal, const HexMesh& mesh,
         const Lattice& lat, int window) {
        std::vector<CVec3> field(nodal.rows());
        for (Eigen::Index i = 0; i < nodal.rows(); ++i)
          field[i] = nodal.row(i).transpose();
        return field_to_py(boundary_mode_coefficients(field, mesh, lat, window));
      },
      py::arg("nodal"), py::arg("mesh"), py::arg("lattice"), py::arg("window"));
  m.def(
      "subtract_incident_trace",
      [](const std::map<PyModeKey, CVec3>& coeffs, double height,
         const Incidence& inc) {
        return field_to_py(
            subtract_incident_trace(field_from_py(coeffs, height), inc));
      },
      py::arg("coeffs"), py::arg("height"), py::arg("incidence"));

  py::class_<EfficiencyTable>(m, "EfficiencyTable")
      .def_property_readonly("e1",
                             [](const EfficiencyTable& t) {
                               std::map<PyModeKey, double> out;
                               for (const auto& [n, e] : t.e1)
                                 out[{n.n1, n.n2}] = e;
                               return out;
                             })
      .def_property_readonly("e2",
                             [](const EfficiencyTable& t) {
                               std::map<PyModeKey, double> out;
                               for (const auto& [n, e] : t.e2)
                                 out[{n.n1, n.n2}] = e;
                               return out;
                             })
      .def_readonly("total", &EfficiencyTable::total);
  m.def(
      "grating_efficiencies",
      [](const std::map<PyModeKey, CVec3>& coeffs, double height,
         const Lattice& lat, const Medium& med, const Incidence& inc,
         double h) {
        return grating_efficiencies(field_from_py(coeffs, height), lat, med,
                                    inc, h);
      },
      py::arg("diffracted"), py::arg("height"), py::arg("lattice"),
      py::arg("medium"), py::arg("incidence"), py::arg("h"));
  m.def("energy_balance", &energy_balance, py::arg("table"));
}
