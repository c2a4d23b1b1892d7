// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "elgrat/linalg.hpp"
#include "elgrat/pml.hpp"

namespace elgrat {

struct Mesh1D {
  double lo = 0.0;
  double hi = 1.0;
  int elements = 1;

  double spacing() const { return (hi - lo) / elements; }
  double node(int i) const { return lo + spacing() * i; }
  int node_count() const { return elements + 1; }
};

/// Horizontal reduction of the volume form for one mode: factors multiplying
/// the vertical element integrals. The spectral variant substitutes the exact
/// mode wave vector; the grid variant (used by the structured 3D solver)
/// substitutes difference symbols of the horizontal discretization.
struct HorizontalFactors {
  Complex pair1{0.0, 0.0}, pair2{0.0, 0.0};   // both-sides derivative terms
  Complex trial1{0.0, 0.0}, trial2{0.0, 0.0}; // derivative on the trial side
  Complex test1{0.0, 0.0}, test2{0.0, 0.0};   // derivative on the test side
  Complex mass1{1.0, 0.0}, mass2{1.0, 0.0};   // derivative-free pairs
};

HorizontalFactors spectral_factors(const Vec2& alpha_n);

/// Per-mode vertical system before boundary conditions (3 unknowns per node):
/// full banded operator plus the weak volume source.
struct ModeSystem1D {
  BandedMatrix full;
  CVecX source;
  Mesh1D mesh;
};

ModeSystem1D assemble_mode_system(
    const HorizontalFactors& hf, const Medium& medium, const PmlProfile& profile,
    const Mesh1D& mesh, const std::function<CVec3(double)>& volume_source = {},
    int quadrature_points = 3);

/// Solves the per-mode problem with displacement data at both ends.
/// The optional volume source is the strong residual the solution must
/// balance (weak right-hand side -integral(rho*source*conj(v))).
std::vector<CVec3> solve_mode_bvp(
    const ModeData& mode, const Medium& medium, const PmlProfile& profile,
    const Mesh1D& mesh, const CVec3& bc_lo, const CVec3& bc_hi,
    const std::function<CVec3(double)>& volume_source = {},
    int quadrature_points = 3);

/// Discrete layer symbol: columns are the variationally consistent bottom
/// tractions of the layer-only solves with unit displacement data.
CMat3 layer_dtn_numeric(const ModeData& mode, const Medium& medium,
                        const PmlProfile& profile, const Mesh1D& layer_mesh);

/// Mode-0 strong source of the layer-truncated total-field problem
/// (vanishes identically below the layer).
std::function<CVec3(double)> incident_layer_source(const Incidence& inc,
                                                   const Medium& medium,
                                                   const PmlProfile& profile);

/// Full-problem solve of the flat configuration for one absorption scaling,
/// compared against the closed-form reflection solution on the physical part.
struct SweepRow {
  double scale = 1.0;
  double re_zeta = 0.0;
  double im_zeta = 0.0;
  double l2_error = 0.0;
};

std::vector<SweepRow> pml_convergence_study(const Incidence& inc,
                                            const Medium& medium,
                                            const PmlProfile& base_profile,
                                            const std::vector<double>& scalings,
                                            const Mesh1D& mesh);

/// Nodal solution of the flat total-field problem on [0, start+thickness].
std::vector<CVec3> solve_flat_total_field(const Incidence& inc,
                                          const Medium& medium,
                                          const PmlProfile& profile,
                                          const Mesh1D& mesh);

/// L2 distance over [lo_limit, hi_limit] between the piecewise-linear nodal
/// field and a reference profile.
double l2_profile_error(const Mesh1D& mesh, const std::vector<CVec3>& nodal,
                        const std::function<CVec3(double)>& reference,
                        double lo_limit, double hi_limit);

} // namespace elgrat
