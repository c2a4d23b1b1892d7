// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "elgrat/fields.hpp"
#include "elgrat/hexmesh.hpp"
#include "elgrat/pml.hpp"
#include "elgrat/solver1d.hpp"

namespace elgrat {

struct CsrMatrix {
  int rows = 0;
  std::vector<int> ptr;
  std::vector<int> col;
  std::vector<Complex> val;

  void multiply(const CVecX& x, CVecX& y) const;
  Complex get(int i, int j) const;
};

struct AssembleOptions {
  bool include_mass = true;
  bool lift_dirichlet = true;        // false treats every node as free
  bool include_boundary_term = true; // transparent-boundary modal term
};

/// Volume operator on the free quasi-periodic unknowns plus, for the
/// transparent-boundary variant, a low-rank modal term on the top plane.
struct AssembledSystem {
  CsrMatrix matrix;
  CVecX rhs;
  HexMesh mesh;
  Medium medium;
  Incidence incidence;
  PmlProfile profile; // identity profile for the Dtn variant
  int truncation = 0;
  bool has_boundary_term = false;
  std::vector<ModeIndex> boundary_modes;
  std::vector<CMat3> boundary_symbols;

  int unknowns() const { return 3 * mesh.free_node_count; }
  void apply(const CVecX& x, CVecX& y) const;
};

AssembledSystem assemble_system(const HexMesh& mesh, const Medium& medium,
                                const Incidence& inc, const PmlProfile& profile,
                                int dtn_truncation = 5,
                                const AssembleOptions& options = {});

struct SolveReport {
  std::string method;
  int iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
  int unknowns = 0;
  std::vector<double> residual_history;
};

struct Solution3D {
  std::vector<CVec3> nodal; // full lattice, Dirichlet and slaves included
  SolveReport report;
};

/// Direct solve through the horizontal Bloch-mode diagonalization for flat
/// geometry; the same factorization preconditions BiCGStab on bump meshes.
/// The returned relative residual is always measured against the assembled
/// system.
Solution3D solve_system(const AssembledSystem& system, double tol = 1e-8,
                        int max_iter = 400);

/// Fourier coefficients of the nodal field on the trace plane x3 = h,
/// window |n_i| <= window (must stay below the grid Nyquist limit).
FourierVectorField boundary_mode_coefficients(const std::vector<CVec3>& nodal,
                                              const HexMesh& mesh,
                                              const Lattice& lattice,
                                              int window);

/// Subtracts the incident mode-0 trace, turning total-field coefficients
/// into diffracted-field coefficients.
FourierVectorField subtract_incident_trace(const FourierVectorField& total,
                                           const Incidence& inc);

} // namespace elgrat
