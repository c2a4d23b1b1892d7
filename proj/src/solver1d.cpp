// SPDX-License-Identifier: Apache-2.0
#include "elgrat/solver1d.hpp"

#include <array>
#include <cmath>

#include "elgrat/fields.hpp"

namespace elgrat {

namespace {

struct QuadRule {
  std::array<double, 3> xi{};
  std::array<double, 3> w{};
  int points = 0;
};

QuadRule gauss_rule(int points) {
  QuadRule q;
  q.points = points;
  if (points == 2) {
    const double g = 1.0 / std::sqrt(3.0);
    q.xi = {-g, g, 0.0};
    q.w = {1.0, 1.0, 0.0};
  } else if (points == 3) {
    const double g = std::sqrt(3.0 / 5.0);
    q.xi = {-g, 0.0, g};
    q.w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  } else {
    throw ParameterError("gauss_rule: 2 or 3 points supported");
  }
  return q;
}

constexpr int kBand = 5; // 3 components x adjacent nodes

} // namespace

HorizontalFactors spectral_factors(const Vec2& alpha_n) {
  HorizontalFactors hf;
  hf.pair1 = alpha_n[0] * alpha_n[0];
  hf.pair2 = alpha_n[1] * alpha_n[1];
  hf.trial1 = iu * alpha_n[0];
  hf.trial2 = iu * alpha_n[1];
  hf.test1 = -iu * alpha_n[0];
  hf.test2 = -iu * alpha_n[1];
  hf.mass1 = 1.0;
  hf.mass2 = 1.0;
  return hf;
}

ModeSystem1D assemble_mode_system(const HorizontalFactors& hf,
                                  const Medium& medium,
                                  const PmlProfile& profile, const Mesh1D& mesh,
                                  const std::function<CVec3(double)>& volume_source,
                                  int quadrature_points) {
  const int nn = mesh.node_count();
  ModeSystem1D sys{BandedMatrix(3 * nn, kBand, kBand), CVecX::Zero(3 * nn),
                   mesh};
  const QuadRule quad = gauss_rule(quadrature_points);
  const double lp2m = medium.lambda + 2.0 * medium.mu;
  const double lpm = medium.lambda + medium.mu;
  const double mu = medium.mu;
  const double om2 = medium.omega * medium.omega;
  const Complex m12 = hf.mass1 * hf.mass2;

  for (int e = 0; e < mesh.elements; ++e) {
    const double z0 = mesh.node(e), z1 = mesh.node(e + 1);
    const double h = z1 - z0;
    Eigen::Matrix<Complex, 6, 6> ke = Eigen::Matrix<Complex, 6, 6>::Zero();
    Eigen::Matrix<Complex, 6, 1> fe = Eigen::Matrix<Complex, 6, 1>::Zero();

    for (int qp = 0; qp < quad.points; ++qp) {
      const double z = 0.5 * (z0 + z1) + 0.5 * h * quad.xi[qp];
      const double w = 0.5 * h * quad.w[qp];
      const Complex rho = profile.rho(z);
      const Complex rho_inv = 1.0 / rho;
      const double n[2] = {(z1 - z) / h, (z - z0) / h};
      const double dn[2] = {-1.0 / h, 1.0 / h};

      // trial node a and component cu vs test node b and component cv
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double mass = n[a] * n[b];
          const double stiff = dn[a] * dn[b];
          const double d_trial = dn[a] * n[b];
          const double d_test = n[a] * dn[b];
          auto at = [&](int cv, int cu) -> Complex& {
            return ke(3 * b + cv, 3 * a + cu);
          };
          at(0, 0) += w * (((lp2m * hf.pair1 * hf.mass2 +
                             mu * hf.mass1 * hf.pair2 - om2 * m12) *
                            rho) *
                               mass +
                           mu * m12 * rho_inv * stiff);
          at(1, 1) += w * (((lp2m * hf.mass1 * hf.pair2 +
                             mu * hf.pair1 * hf.mass2 - om2 * m12) *
                            rho) *
                               mass +
                           mu * m12 * rho_inv * stiff);
          at(2, 2) += w * (((mu * (hf.pair1 * hf.mass2 + hf.mass1 * hf.pair2) -
                             om2 * m12) *
                            rho) *
                               mass +
                           lp2m * m12 * rho_inv * stiff);
          at(0, 1) += w * lpm * hf.trial2 * hf.test1 * rho * mass;
          at(1, 0) += w * lpm * hf.trial1 * hf.test2 * rho * mass;
          at(0, 2) += w * lpm * hf.test1 * hf.mass2 * d_trial;
          at(1, 2) += w * lpm * hf.mass1 * hf.test2 * d_trial;
          at(2, 0) += w * lpm * hf.trial1 * hf.mass2 * d_test;
          at(2, 1) += w * lpm * hf.mass1 * hf.trial2 * d_test;
        }

      if (volume_source) {
        // spectral-variant weak source; the grid variant never carries one
        const CVec3 src = volume_source(z);
        for (int b = 0; b < 2; ++b)
          for (int cv = 0; cv < 3; ++cv)
            fe(3 * b + cv) -= w * rho * src[cv] * n[b];
      }
    }

    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int cu = 0; cu < 3; ++cu)
          for (int cv = 0; cv < 3; ++cv)
            sys.full.add(3 * (e + b) + cv, 3 * (e + a) + cu,
                         ke(3 * b + cv, 3 * a + cu));
    for (int b = 0; b < 2; ++b)
      for (int cv = 0; cv < 3; ++cv)
        sys.source[3 * (e + b) + cv] += fe(3 * b + cv);
  }
  return sys;
}

namespace {

struct ReducedSolve {
  CVecX interior;
  double backward_error = 0.0;
};

// Eliminates the Dirichlet end nodes and solves the interior system.
ReducedSolve solve_with_dirichlet(const ModeSystem1D& sys, const CVec3& bc_lo,
                                  const CVec3& bc_hi) {
  const int nn = sys.mesh.node_count();
  const int n_red = 3 * (nn - 2);
  if (n_red <= 0) throw ParameterError("mesh must have interior nodes");

  BandedMatrix a(n_red, kBand, kBand);
  BandedMatrix a_copy(n_red, kBand, kBand);
  CVecX rhs = CVecX::Zero(n_red);
  const int n_full = 3 * nn;
  for (int i = 0; i < n_red; ++i) {
    const int gi = i + 3;
    rhs[i] = sys.source[gi];
    for (int dj = -kBand; dj <= kBand; ++dj) {
      const int gj = gi + dj;
      if (gj < 0 || gj >= n_full) continue;
      const Complex v = sys.full.get(gi, gj);
      if (v == Complex(0.0, 0.0)) continue;
      if (gj < 3)
        rhs[i] -= v * bc_lo[gj];
      else if (gj >= n_full - 3)
        rhs[i] -= v * bc_hi[gj - (n_full - 3)];
      else
        a.add(gi - 3, gj - 3, v);
    }
  }
  for (int i = 0; i < n_red; ++i)
    for (int dj = -kBand; dj <= kBand; ++dj) {
      const int j = i + dj;
      if (j >= 0 && j < n_red) a_copy.set(i, j, a.get(i, j));
    }

  a.factor();
  ReducedSolve out;
  out.interior = a.solve(rhs);

  const CVecX resid = a_copy.multiply(out.interior) - rhs;
  double a_norm = 0.0;
  for (int i = 0; i < n_red; ++i) {
    double row = 0.0;
    for (int dj = -kBand; dj <= kBand; ++dj) {
      const int j = i + dj;
      if (j >= 0 && j < n_red) row += std::abs(a_copy.get(i, j));
    }
    a_norm = std::max(a_norm, row);
  }
  const double scale =
      a_norm * out.interior.lpNorm<Eigen::Infinity>() +
      rhs.lpNorm<Eigen::Infinity>();
  out.backward_error =
      scale > 0.0 ? resid.lpNorm<Eigen::Infinity>() / scale : 0.0;
  if (!(out.backward_error < 1e-10))
    throw NumericalError("mode bvp solve: backward error " +
                         std::to_string(out.backward_error) +
                         " exceeds 1e-10");
  return out;
}

std::vector<CVec3> expand_solution(const Mesh1D& mesh, const CVecX& interior,
                                   const CVec3& bc_lo, const CVec3& bc_hi) {
  const int nn = mesh.node_count();
  std::vector<CVec3> nodal(nn);
  nodal.front() = bc_lo;
  nodal.back() = bc_hi;
  for (int i = 1; i + 1 < nn; ++i)
    for (int c = 0; c < 3; ++c) nodal[i][c] = interior[3 * (i - 1) + c];
  return nodal;
}

} // namespace

std::vector<CVec3> solve_mode_bvp(const ModeData& mode, const Medium& medium,
                                  const PmlProfile& profile, const Mesh1D& mesh,
                                  const CVec3& bc_lo, const CVec3& bc_hi,
                                  const std::function<CVec3(double)>& volume_source,
                                  int quadrature_points) {
  const ModeSystem1D sys =
      assemble_mode_system(spectral_factors(mode.alpha_n), medium, profile,
                           mesh, volume_source, quadrature_points);
  const ReducedSolve red = solve_with_dirichlet(sys, bc_lo, bc_hi);
  return expand_solution(mesh, red.interior, bc_lo, bc_hi);
}

CMat3 layer_dtn_numeric(const ModeData& mode, const Medium& medium,
                        const PmlProfile& profile, const Mesh1D& layer_mesh) {
  const ModeSystem1D sys = assemble_mode_system(
      spectral_factors(mode.alpha_n), medium, profile, layer_mesh, {}, 3);
  const int n_full = 3 * layer_mesh.node_count();

  CMat3 result;
  for (int k = 0; k < 3; ++k) {
    CVec3 bc_lo = CVec3::Zero();
    bc_lo[k] = 1.0;
    const ReducedSolve red = solve_with_dirichlet(sys, bc_lo, CVec3::Zero());
    const std::vector<CVec3> nodal =
        expand_solution(layer_mesh, red.interior, bc_lo, CVec3::Zero());
    // consistent flux: traction = -(bottom row of the unconstrained operator
    // applied to the solution); the weak source vanishes here
    for (int cv = 0; cv < 3; ++cv) {
      Complex t(0.0, 0.0);
      for (int gj = 0; gj < std::min(n_full, kBand + 3); ++gj)
        t += sys.full.get(cv, gj) * nodal[gj / 3][gj % 3];
      result(cv, k) = -t;
    }
  }
  return result;
}

std::function<CVec3(double)> incident_layer_source(const Incidence& inc,
                                                   const Medium& medium,
                                                   const PmlProfile& profile) {
  const double a1 = inc.alpha[0], a2 = inc.alpha[1], beta = inc.beta;
  const Vec3 q = inc.q;
  const double lp2m = medium.lambda + 2.0 * medium.mu;
  const double lpm = medium.lambda + medium.mu;
  const double mu = medium.mu;
  const double om2 = medium.omega * medium.omega;
  return [=](double z) -> CVec3 {
    if (z <= profile.start) return CVec3::Zero();
    const Complex rho = profile.rho(z);
    const Complex rho_p = profile.rho_prime(z);
    const Complex rinv = 1.0 / rho;
    const Complex phase = std::exp(-iu * beta * z);
    // rho^-1 d3(rho^-1 d3 .) applied to e^{-i beta z}
    const Complex vert = iu * beta * rho_p * rinv * rinv * rinv -
                         beta * beta * rinv * rinv;
    CVec3 w;
    w[0] = (-lp2m * a1 * a1 - mu * a2 * a2 + om2) * q[0] + mu * vert * q[0] -
           lpm * a1 * a2 * q[1] + lpm * a1 * beta * rinv * q[2];
    w[1] = (-lp2m * a2 * a2 - mu * a1 * a1 + om2) * q[1] + mu * vert * q[1] -
           lpm * a1 * a2 * q[0] + lpm * a2 * beta * rinv * q[2];
    w[2] = lp2m * vert * q[2] + (-mu * (a1 * a1 + a2 * a2) + om2) * q[2] +
           lpm * rinv * beta * (a1 * q[0] + a2 * q[1]);
    return w * phase;
  };
}

std::vector<CVec3> solve_flat_total_field(const Incidence& inc,
                                          const Medium& medium,
                                          const PmlProfile& profile,
                                          const Mesh1D& mesh) {
  const Lattice unit{1.0, 1.0, inc.alpha};
  const ModeData mode0 = mode_data(unit, medium, ModeIndex{0, 0});
  const CVec3 bc_hi =
      inc.q.cast<Complex>() * std::exp(-iu * inc.beta * mesh.hi);
  return solve_mode_bvp(mode0, medium, profile, mesh, CVec3::Zero(), bc_hi,
                        incident_layer_source(inc, medium, profile));
}

double l2_profile_error(const Mesh1D& mesh, const std::vector<CVec3>& nodal,
                        const std::function<CVec3(double)>& reference,
                        double lo_limit, double hi_limit) {
  const QuadRule quad = gauss_rule(3);
  double acc = 0.0;
  for (int e = 0; e < mesh.elements; ++e) {
    const double z0 = std::max(mesh.node(e), lo_limit);
    const double z1 = std::min(mesh.node(e + 1), hi_limit);
    if (z1 <= z0) continue;
    const double he = mesh.spacing();
    for (int qp = 0; qp < quad.points; ++qp) {
      const double z = 0.5 * (z0 + z1) + 0.5 * (z1 - z0) * quad.xi[qp];
      const double w = 0.5 * (z1 - z0) * quad.w[qp];
      const double t = (z - mesh.node(e)) / he;
      const CVec3 uh = (1.0 - t) * nodal[e] + t * nodal[e + 1];
      acc += w * (uh - reference(z)).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

std::vector<SweepRow> pml_convergence_study(const Incidence& inc,
                                            const Medium& medium,
                                            const PmlProfile& base_profile,
                                            const std::vector<double>& scalings,
                                            const Mesh1D& mesh) {
  const ExactFlatSolution exact = exact_flat_solution(inc, medium);
  const auto reference = [&](double z) {
    return eval_exact(exact, Vec3(0.0, 0.0, z));
  };
  std::vector<SweepRow> rows;
  for (const double s : scalings) {
    const PmlProfile profile = make_profile(
        base_profile.start, base_profile.thickness, s * base_profile.sigma,
        base_profile.degree);
    const std::vector<CVec3> nodal =
        solve_flat_total_field(inc, medium, profile, mesh);
    SweepRow row;
    row.scale = s;
    row.re_zeta = profile.zeta().real();
    row.im_zeta = profile.zeta().imag();
    row.l2_error =
        l2_profile_error(mesh, nodal, reference, mesh.lo, profile.start);
    rows.push_back(row);
  }
  return rows;
}

} // namespace elgrat
