// SPDX-License-Identifier: Apache-2.0
#include "elgrat/solver3d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace elgrat {

namespace {

constexpr double kGauss2 = 0.57735026918962576; // 1/sqrt(3)

PmlProfile identity_profile(double z_top) {
  PmlProfile p;
  p.start = 2.0 * z_top + 1.0;
  p.thickness = 1.0;
  p.sigma = Complex(0.0, 0.0);
  p.degree = 2;
  return p;
}

HorizontalFactors grid_factors(double theta1, double theta2, double h1,
                               double h2) {
  HorizontalFactors hf;
  hf.mass1 = h1 * (2.0 + std::cos(theta1)) / 3.0;
  hf.mass2 = h2 * (2.0 + std::cos(theta2)) / 3.0;
  hf.pair1 = 2.0 * (1.0 - std::cos(theta1)) / h1;
  hf.pair2 = 2.0 * (1.0 - std::cos(theta2)) / h2;
  hf.trial1 = iu * std::sin(theta1);
  hf.trial2 = iu * std::sin(theta2);
  hf.test1 = -iu * std::sin(theta1);
  hf.test2 = -iu * std::sin(theta2);
  return hf;
}

CVec3 dirichlet_value(const HexMesh& mesh, const Medium& medium,
                      const Incidence& inc, int i1, int i2, int i3) {
  if (mesh.variant == Variant::Pml && i3 == mesh.n3)
    return incident_field(inc, medium, mesh.node_position(i1, i2, i3));
  return CVec3::Zero(); // scattering surface
}

// Signed lattice index of a horizontal grid mode.
int signed_mode(int k, int cells) {
  return k > cells / 2 ? k - cells : k;
}

struct ElementKernels {
  // per z-level element matrix (24x24) and reference load (24), the load
  // carrying quadrature phases relative to the element corner
  std::vector<Eigen::Matrix<Complex, 24, 24>> ke;
  std::vector<Eigen::Matrix<Complex, 24, 1>> fe;
};

ElementKernels element_kernels(const HexMesh& mesh, const Medium& medium,
                               const Incidence& inc, const PmlProfile& profile,
                               bool include_mass, bool with_volume_source) {
  const double d1 = mesh.dx1(), d2 = mesh.dx2(), d3 = mesh.dz();
  const double lp2m = medium.lambda + 2.0 * medium.mu;
  const double lpm = medium.lambda + medium.mu;
  const double mu = medium.mu;
  const double om2 = medium.omega * medium.omega;
  const auto source = with_volume_source
                          ? incident_layer_source(inc, medium, profile)
                          : std::function<CVec3(double)>{};

  ElementKernels out;
  out.ke.resize(mesh.n3);
  out.fe.resize(mesh.n3);
  for (int e3 = 0; e3 < mesh.n3; ++e3) {
    auto& ke = out.ke[e3];
    auto& fe = out.fe[e3];
    ke.setZero();
    fe.setZero();
    const double z0 = e3 * d3;

    for (int q1 = 0; q1 < 2; ++q1)
      for (int q2 = 0; q2 < 2; ++q2)
        for (int q3 = 0; q3 < 2; ++q3) {
          const double x1 = 0.5 * d1 * (1.0 + (q1 ? kGauss2 : -kGauss2));
          const double x2 = 0.5 * d2 * (1.0 + (q2 ? kGauss2 : -kGauss2));
          const double x3r = 0.5 * d3 * (1.0 + (q3 ? kGauss2 : -kGauss2));
          const double z = z0 + x3r;
          const double w = d1 * d2 * d3 / 8.0;
          const Complex rho = profile.rho(z);
          const Complex ri = 1.0 / rho;

          double val[8], grad[8][3];
          for (int a = 0; a < 8; ++a) {
            const int a1 = a & 1, a2 = (a >> 1) & 1, a3 = (a >> 2) & 1;
            const double l1 = a1 ? x1 / d1 : 1.0 - x1 / d1;
            const double l2 = a2 ? x2 / d2 : 1.0 - x2 / d2;
            const double l3 = a3 ? x3r / d3 : 1.0 - x3r / d3;
            const double g1 = (a1 ? 1.0 : -1.0) / d1;
            const double g2 = (a2 ? 1.0 : -1.0) / d2;
            const double g3 = (a3 ? 1.0 : -1.0) / d3;
            val[a] = l1 * l2 * l3;
            grad[a][0] = g1 * l2 * l3;
            grad[a][1] = l1 * g2 * l3;
            grad[a][2] = l1 * l2 * g3;
          }

          for (int a = 0; a < 8; ++a)    // trial
            for (int b = 0; b < 8; ++b) { // test
              const double m = val[a] * val[b];
              const double g11 = grad[a][0] * grad[b][0];
              const double g22 = grad[a][1] * grad[b][1];
              const double g33 = grad[a][2] * grad[b][2];
              auto at = [&](int cv, int cu) -> Complex& {
                return ke(3 * b + cv, 3 * a + cu);
              };
              const Complex mass_term =
                  include_mass ? -om2 * rho * m : Complex(0.0, 0.0);
              at(0, 0) += w * (rho * (lp2m * g11 + mu * g22) + mu * ri * g33 +
                               mass_term);
              at(1, 1) += w * (rho * (lp2m * g22 + mu * g11) + mu * ri * g33 +
                               mass_term);
              at(2, 2) += w * (lp2m * ri * g33 + mu * rho * (g11 + g22) +
                               mass_term);
              at(0, 1) += w * lpm * rho * grad[a][1] * grad[b][0];
              at(1, 0) += w * lpm * rho * grad[a][0] * grad[b][1];
              at(0, 2) += w * lpm * grad[a][2] * grad[b][0];
              at(1, 2) += w * lpm * grad[a][2] * grad[b][1];
              at(2, 0) += w * lpm * grad[a][0] * grad[b][2];
              at(2, 1) += w * lpm * grad[a][1] * grad[b][2];
            }

          if (source) {
            const CVec3 s = source(z);
            if (s.squaredNorm() > 0.0) {
              const Complex horiz =
                  std::exp(iu * (inc.alpha[0] * x1 + inc.alpha[1] * x2));
              for (int b = 0; b < 8; ++b)
                for (int c = 0; c < 3; ++c)
                  fe(3 * b + c) -= w * rho * s[c] * horiz * val[b];
            }
          }
        }
  }
  return out;
}

} // namespace

void CsrMatrix::multiply(const CVecX& x, CVecX& y) const {
  y.setZero();
  for (int i = 0; i < rows; ++i) {
    Complex s(0.0, 0.0);
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

Complex CsrMatrix::get(int i, int j) const {
  for (int k = ptr[i]; k < ptr[i + 1]; ++k)
    if (col[k] == j) return val[k];
  return Complex(0.0, 0.0);
}

void AssembledSystem::apply(const CVecX& x, CVecX& y) const {
  matrix.multiply(x, y);
  if (!has_boundary_term) return;

  const int L1 = mesh.n1, L2 = mesh.n2;
  const double fac = mesh.period1 * mesh.period2 / double(L1 * L2) /
                     double(L1 * L2);
  const int level = mesh.n3; // trace plane is the top plane in this variant
  for (size_t m = 0; m < boundary_modes.size(); ++m) {
    const ModeIndex n = boundary_modes[m];
    const double t1 =
        (mesh.bloch[0] * mesh.period1 + 2.0 * std::numbers::pi * n.n1) / L1;
    const double t2 =
        (mesh.bloch[1] * mesh.period2 + 2.0 * std::numbers::pi * n.n2) / L2;
    CVec3 u_mode = CVec3::Zero();
    for (int i1 = 0; i1 < L1; ++i1)
      for (int i2 = 0; i2 < L2; ++i2) {
        const int blk = mesh.free_block[mesh.node_id(i1, i2, level)];
        if (blk < 0) continue;
        const Complex ph = std::exp(-iu * (t1 * i1 + t2 * i2));
        for (int c = 0; c < 3; ++c) u_mode[c] += ph * x[3 * blk + c];
      }
    const CVec3 t_mode = boundary_symbols[m] * u_mode;
    for (int i1 = 0; i1 < L1; ++i1)
      for (int i2 = 0; i2 < L2; ++i2) {
        const int blk = mesh.free_block[mesh.node_id(i1, i2, level)];
        if (blk < 0) continue;
        const Complex ph = std::exp(iu * (t1 * i1 + t2 * i2));
        for (int c = 0; c < 3; ++c) y[3 * blk + c] -= fac * ph * t_mode[c];
      }
  }
}

AssembledSystem assemble_system(const HexMesh& mesh, const Medium& medium,
                                const Incidence& inc, const PmlProfile& profile,
                                int dtn_truncation,
                                const AssembleOptions& options) {
  AssembledSystem sys;
  sys.mesh = mesh;
  sys.medium = medium;
  sys.incidence = inc;
  sys.profile =
      mesh.variant == Variant::Pml ? profile : identity_profile(mesh.z_top);
  sys.truncation = dtn_truncation;

  if (mesh.variant == Variant::Pml &&
      std::abs(profile.start - mesh.h) > 1e-12)
    throw ParameterError("assemble_system: layer must start at the trace plane");
  if (mesh.variant == Variant::Dtn &&
      2 * dtn_truncation + 1 > std::min(mesh.n1, mesh.n2))
    throw ParameterError(
        "assemble_system: truncation exceeds the grid Nyquist window");

  // Dof map: free masters, or all active masters when Dirichlet lifting is
  // disabled (operator-inspection mode).
  std::vector<int> dof(mesh.node_count(), -1);
  int dof_count = 0;
  for (int id = 0; id < mesh.node_count(); ++id) {
    if (mesh.master_node[id] != id) continue;
    const NodeClass cls = mesh.node_class[id];
    if (cls == NodeClass::Free ||
        (!options.lift_dirichlet && cls == NodeClass::Dirichlet))
      dof[id] = dof_count++;
  }
  if (!options.lift_dirichlet) {
    sys.mesh.free_block = dof;
    sys.mesh.free_node_count = dof_count;
  }

  // sparsity pattern: wrapped 27-point stencil between dof nodes
  const int rows = 3 * dof_count;
  std::vector<std::vector<int>> columns(dof_count);
  for (int i1 = 0; i1 <= mesh.n1; ++i1)
    for (int i2 = 0; i2 <= mesh.n2; ++i2)
      for (int i3 = 0; i3 <= mesh.n3; ++i3) {
        const int row_blk = dof[mesh.node_id(i1, i2, i3)];
        if (row_blk < 0) continue;
        auto& cols = columns[row_blk];
        for (int d1 = -1; d1 <= 1; ++d1)
          for (int d2 = -1; d2 <= 1; ++d2)
            for (int d3 = -1; d3 <= 1; ++d3) {
              const int j3 = i3 + d3;
              if (j3 < 0 || j3 > mesh.n3) continue;
              const int j1 = (i1 + d1 + mesh.n1) % mesh.n1;
              const int j2 = (i2 + d2 + mesh.n2) % mesh.n2;
              const int cb = dof[mesh.node_id(j1, j2, j3)];
              if (cb >= 0) cols.push_back(cb);
            }
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      }

  CsrMatrix& a = sys.matrix;
  a.rows = rows;
  a.ptr.assign(rows + 1, 0);
  for (int blk = 0; blk < dof_count; ++blk)
    for (int c = 0; c < 3; ++c)
      a.ptr[3 * blk + c + 1] = int(columns[blk].size()) * 3;
  for (int i = 0; i < rows; ++i) a.ptr[i + 1] += a.ptr[i];
  a.col.resize(a.ptr[rows]);
  a.val.assign(a.ptr[rows], Complex(0.0, 0.0));
  for (int blk = 0; blk < dof_count; ++blk)
    for (int c = 0; c < 3; ++c) {
      int k = a.ptr[3 * blk + c];
      for (const int cb : columns[blk])
        for (int cc = 0; cc < 3; ++cc) a.col[k++] = 3 * cb + cc;
    }
  const auto entry = [&](int row, int column) -> Complex& {
    const int lo = a.ptr[row], hi = a.ptr[row + 1];
    const auto it =
        std::lower_bound(a.col.begin() + lo, a.col.begin() + hi, column);
    if (it == a.col.begin() + hi || *it != column)
      throw NumericalError("assemble_system: entry outside pattern");
    return a.val[it - a.col.begin()];
  };

  sys.rhs = CVecX::Zero(rows);
  const bool pml_source = mesh.variant == Variant::Pml;
  const ElementKernels kernels = element_kernels(
      mesh, medium, inc, sys.profile, options.include_mass, pml_source);

  for (int e1 = 0; e1 < mesh.n1; ++e1)
    for (int e2 = 0; e2 < mesh.n2; ++e2) {
      const Complex corner_phase = std::exp(
          iu * (inc.alpha[0] * e1 * mesh.dx1() + inc.alpha[1] * e2 * mesh.dx2()));
      for (int e3 = 0; e3 < mesh.n3; ++e3) {
        if (!mesh.element_active[mesh.element_id(e1, e2, e3)]) continue;
        const auto& ke = kernels.ke[e3];
        const auto& fe = kernels.fe[e3];

        int node[8], blk[8];
        Complex ph[8];
        CVec3 lift[8];
        bool lifted[8];
        for (int aa = 0; aa < 8; ++aa) {
          const int i1 = e1 + (aa & 1);
          const int i2 = e2 + ((aa >> 1) & 1);
          const int i3 = e3 + ((aa >> 2) & 1);
          node[aa] = mesh.node_id(i1, i2, i3);
          const int master = mesh.master_node[node[aa]];
          blk[aa] = dof[master];
          ph[aa] = mesh.phase[node[aa]];
          lifted[aa] = options.lift_dirichlet &&
                       mesh.node_class[node[aa]] == NodeClass::Dirichlet;
          lift[aa] = lifted[aa]
                         ? dirichlet_value(mesh, medium, inc, i1, i2, i3)
                         : CVec3::Zero();
        }

        for (int b = 0; b < 8; ++b) { // test; slave rows fold onto masters
          if (blk[b] < 0 || lifted[b]) continue;
          const Complex pb = std::conj(ph[b]);
          for (int cv = 0; cv < 3; ++cv) {
            const int row = 3 * blk[b] + cv;
            for (int aa = 0; aa < 8; ++aa) {
              if (lifted[aa]) {
                Complex s(0.0, 0.0);
                for (int cu = 0; cu < 3; ++cu)
                  s += ke(3 * b + cv, 3 * aa + cu) * lift[aa][cu];
                sys.rhs[row] -= pb * s;
                continue;
              }
              if (blk[aa] < 0) continue;
              const Complex pa = ph[aa];
              for (int cu = 0; cu < 3; ++cu)
                entry(row, 3 * blk[aa] + cu) +=
                    pb * pa * ke(3 * b + cv, 3 * aa + cu);
            }
            sys.rhs[row] += pb * corner_phase * fe(3 * b + cv);
          }
        }
      }
    }

  if (mesh.variant == Variant::Dtn && options.include_boundary_term) {
    sys.has_boundary_term = true;
    const Lattice lattice{mesh.period1, mesh.period2, mesh.bloch};
    for (int n1 = -dtn_truncation; n1 <= dtn_truncation; ++n1)
      for (int n2 = -dtn_truncation; n2 <= dtn_truncation; ++n2) {
        const ModeData md = mode_data(lattice, medium, ModeIndex{n1, n2});
        sys.boundary_modes.push_back(ModeIndex{n1, n2});
        sys.boundary_symbols.push_back(dtn_matrix(md, medium));
      }

    const BoundarySource g = boundary_source_g(inc, medium, mesh.h);
    const double area_w =
        mesh.period1 * mesh.period2 / double(mesh.n1 * mesh.n2);
    for (int i1 = 0; i1 < mesh.n1; ++i1)
      for (int i2 = 0; i2 < mesh.n2; ++i2) {
        const int blkb = dof[mesh.node_id(i1, i2, mesh.n3)];
        if (blkb < 0) continue;
        const Complex ph = std::exp(
            iu * (inc.alpha[0] * i1 * mesh.dx1() + inc.alpha[1] * i2 * mesh.dx2()));
        for (int c = 0; c < 3; ++c)
          sys.rhs[3 * blkb + c] += area_w * g.g0[c] * ph;
      }
  }
  return sys;
}

namespace {

/// Vertical block-tridiagonal factorizations per horizontal Bloch mode; the
/// exact inverse of the assembled operator on flat meshes and the
/// preconditioner on bump meshes.
class ModeBank {
public:
  ModeBank(const AssembledSystem& sys) : sys_(sys) {
    const HexMesh& mesh = sys.mesh;
    const int L1 = mesh.n1, L2 = mesh.n2;
    red_lo_ = 1;
    red_hi_ = mesh.variant == Variant::Pml ? mesh.n3 - 1 : mesh.n3;
    red_levels_ = red_hi_ - red_lo_ + 1;

    const Mesh1D vmesh{0.0, mesh.z_top, mesh.n3};
    const double fac = mesh.period1 * mesh.period2 / double(L1 * L2);
    lus_.reserve(size_t(L1) * L2);
    const Lattice lattice{mesh.period1, mesh.period2, mesh.bloch};

    for (int k1 = 0; k1 < L1; ++k1)
      for (int k2 = 0; k2 < L2; ++k2) {
        const double t1 =
            (mesh.bloch[0] * mesh.period1 + 2.0 * std::numbers::pi * k1) / L1;
        const double t2 =
            (mesh.bloch[1] * mesh.period2 + 2.0 * std::numbers::pi * k2) / L2;
        const HorizontalFactors hf =
            grid_factors(t1, t2, mesh.dx1(), mesh.dx2());
        ModeSystem1D vertical = assemble_mode_system(
            hf, sys.medium, sys.profile, vmesh, {}, 2);

        BandedMatrix reduced(3 * red_levels_, 5, 5);
        for (int li = 0; li < red_levels_; ++li)
          for (int ci = 0; ci < 3; ++ci) {
            const int gi = 3 * (red_lo_ + li) + ci;
            for (int dj = -5; dj <= 5; ++dj) {
              const int gj = gi + dj;
              const int lj = gj - 3 * red_lo_;
              if (lj < 0 || lj >= 3 * red_levels_) continue;
              reduced.set(3 * li + ci, lj, vertical.full.get(gi, gj));
            }
          }

        if (sys.has_boundary_term) {
          const int n1s = signed_mode(k1, L1), n2s = signed_mode(k2, L2);
          if (std::abs(n1s) <= sys.truncation &&
              std::abs(n2s) <= sys.truncation) {
            const ModeData md =
                mode_data(lattice, sys.medium, ModeIndex{n1s, n2s});
            const CMat3 sym = dtn_matrix(md, sys.medium);
            const int top = 3 * (red_levels_ - 1);
            for (int cv = 0; cv < 3; ++cv)
              for (int cu = 0; cu < 3; ++cu)
                reduced.add(top + cv, top + cu, -fac * sym(cv, cu));
          }
        }
        reduced.factor();
        lus_.push_back(std::move(reduced));
      }

    // row k of the forward matrix carries angle theta_k = (alpha*P + 2*pi*k)/L
    w1f_.resize(L1, L1);
    w2f_.resize(L2, L2);
    for (int k = 0; k < L1; ++k) {
      const double t =
          (mesh.bloch[0] * mesh.period1 + 2.0 * std::numbers::pi * k) / L1;
      for (int j = 0; j < L1; ++j) w1f_(k, j) = std::exp(-iu * t * double(j));
    }
    for (int k = 0; k < L2; ++k) {
      const double t =
          (mesh.bloch[1] * mesh.period2 + 2.0 * std::numbers::pi * k) / L2;
      for (int j = 0; j < L2; ++j) w2f_(k, j) = std::exp(-iu * t * double(j));
    }
  }

  // Applies the inverse of the flat-mesh operator to a free-dof vector.
  CVecX apply_inverse(const CVecX& r) const {
    const HexMesh& mesh = sys_.mesh;
    const int L1 = mesh.n1, L2 = mesh.n2, nlev = mesh.n3 + 1;

    std::vector<Eigen::MatrixXcd> slab(size_t(nlev) * 3,
                                       Eigen::MatrixXcd::Zero(L1, L2));
    for (int i1 = 0; i1 < L1; ++i1)
      for (int i2 = 0; i2 < L2; ++i2)
        for (int lvl = 0; lvl < nlev; ++lvl) {
          const int blk = mesh.free_block[mesh.node_id(i1, i2, lvl)];
          if (blk < 0) continue;
          for (int c = 0; c < 3; ++c)
            slab[size_t(lvl) * 3 + c](i1, i2) = r[3 * blk + c];
        }

    for (auto& s : slab) s = w1f_ * s * w2f_.transpose();

    CVecX mode_rhs(3 * red_levels_);
    for (int k1 = 0; k1 < L1; ++k1)
      for (int k2 = 0; k2 < L2; ++k2) {
        for (int li = 0; li < red_levels_; ++li)
          for (int c = 0; c < 3; ++c)
            mode_rhs[3 * li + c] = slab[size_t(red_lo_ + li) * 3 + c](k1, k2);
        const CVecX sol = lus_[size_t(k1) * L2 + k2].solve(mode_rhs);
        for (int lvl = 0; lvl < nlev; ++lvl)
          for (int c = 0; c < 3; ++c) {
            const int li = lvl - red_lo_;
            slab[size_t(lvl) * 3 + c](k1, k2) =
                (li >= 0 && li < red_levels_) ? sol[3 * li + c]
                                              : Complex(0.0, 0.0);
          }
      }

    const double norm = 1.0 / double(L1 * L2);
    for (auto& s : slab) s = (w1f_.adjoint() * s * w2f_.conjugate()) * norm;

    CVecX x = CVecX::Zero(r.size());
    for (int i1 = 0; i1 < L1; ++i1)
      for (int i2 = 0; i2 < L2; ++i2)
        for (int lvl = 0; lvl < nlev; ++lvl) {
          const int blk = mesh.free_block[mesh.node_id(i1, i2, lvl)];
          if (blk < 0) continue;
          for (int c = 0; c < 3; ++c)
            x[3 * blk + c] = slab[size_t(lvl) * 3 + c](i1, i2);
        }
    return x;
  }

private:
  const AssembledSystem& sys_;
  int red_lo_ = 1, red_hi_ = 1, red_levels_ = 1;
  std::vector<BandedMatrix> lus_;
  Eigen::MatrixXcd w1f_, w2f_;
};

double rel_residual(const AssembledSystem& sys, const CVecX& x,
                    const CVecX& b) {
  CVecX ax(b.size());
  sys.apply(x, ax);
  const double bn = b.norm();
  return bn > 0.0 ? (ax - b).norm() / bn : (ax - b).norm();
}

} // namespace

Solution3D solve_system(const AssembledSystem& sys, double tol, int max_iter) {
  const auto t_start = std::chrono::steady_clock::now();
  const HexMesh& mesh = sys.mesh;
  Solution3D out;
  out.report.unknowns = int(sys.rhs.size());

  const ModeBank bank(sys);
  const CVecX& b = sys.rhs;
  CVecX x = bank.apply_inverse(b);
  double resid = rel_residual(sys, x, b);
  out.report.residual_history.push_back(resid);

  if (mesh.geometry.flat() && resid <= tol) {
    out.report.method = "bloch-direct";
    out.report.iterations = 0;
  } else {
    // flat preconditioner, BiCGStab on the assembled operator
    out.report.method = "bicgstab(bloch-preconditioned)";
    const int n = int(b.size());
    CVecX r(n), ax(n);
    sys.apply(x, ax);
    r = b - ax;
    const CVecX r_shadow = r;
    const double b_norm = std::max(b.norm(), 1e-300);
    Complex rho_prev(1.0, 0.0), alpha(1.0, 0.0), omega(1.0, 0.0);
    CVecX v = CVecX::Zero(n), p = CVecX::Zero(n);
    int it = 0;
    for (; it < max_iter && resid > tol; ++it) {
      const Complex rho = r_shadow.dot(r);
      if (std::abs(rho) < 1e-300)
        throw NumericalError("solve_system: BiCGStab breakdown (rho)");
      if (it == 0) {
        p = r;
      } else {
        const Complex beta = (rho / rho_prev) * (alpha / omega);
        p = r + beta * (p - omega * v);
      }
      const CVecX p_hat = bank.apply_inverse(p);
      sys.apply(p_hat, v);
      alpha = rho / r_shadow.dot(v);
      const CVecX s = r - alpha * v;
      if (s.norm() / b_norm <= tol) {
        x += alpha * p_hat;
        resid = rel_residual(sys, x, b);
        out.report.residual_history.push_back(resid);
        ++it;
        break;
      }
      const CVecX s_hat = bank.apply_inverse(s);
      CVecX t(n);
      sys.apply(s_hat, t);
      omega = t.dot(s) / t.dot(t);
      x += alpha * p_hat + omega * s_hat;
      r = s - omega * t;
      rho_prev = rho;
      resid = r.norm() / b_norm;
      out.report.residual_history.push_back(resid);
    }
    out.report.iterations = it;
    resid = rel_residual(sys, x, b);
    if (resid > tol) {
      std::string hist;
      const size_t n_hist = out.report.residual_history.size();
      for (size_t i = n_hist > 6 ? n_hist - 6 : 0; i < n_hist; ++i)
        hist += " " + std::to_string(out.report.residual_history[i]);
      throw NumericalError("solve_system: no convergence to " +
                           std::to_string(tol) + "; residual history tail:" +
                           hist);
    }
  }
  out.report.relative_residual = resid;

  // expand to the full lattice
  out.nodal.assign(mesh.node_count(), CVec3::Zero());
  for (int i1 = 0; i1 <= mesh.n1; ++i1)
    for (int i2 = 0; i2 <= mesh.n2; ++i2)
      for (int i3 = 0; i3 <= mesh.n3; ++i3) {
        const int id = mesh.node_id(i1, i2, i3);
        switch (mesh.node_class[id]) {
        case NodeClass::Free:
          for (int c = 0; c < 3; ++c)
            out.nodal[id][c] = x[3 * mesh.free_block[id] + c];
          break;
        case NodeClass::Dirichlet:
          out.nodal[id] = dirichlet_value(mesh, sys.medium, sys.incidence,
                                          i1, i2, i3);
          break;
        case NodeClass::Slave: {
          const int m = mesh.master_node[id];
          const CVec3 mv =
              mesh.node_class[m] == NodeClass::Free
                  ? CVec3(x[3 * mesh.free_block[m]], x[3 * mesh.free_block[m] + 1],
                          x[3 * mesh.free_block[m] + 2])
                  : out.nodal[m];
          out.nodal[id] = mesh.phase[id] * mv;
          break;
        }
        case NodeClass::Excluded:
          break;
        }
      }

  out.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return out;
}

FourierVectorField boundary_mode_coefficients(const std::vector<CVec3>& nodal,
                                              const HexMesh& mesh,
                                              const Lattice& lattice,
                                              int window) {
  if (2 * window + 1 > std::min(mesh.n1, mesh.n2))
    throw ParameterError(
        "boundary_mode_coefficients: window exceeds the grid Nyquist limit");
  const int level = mesh.trace_level();
  const int L1 = mesh.n1, L2 = mesh.n2;

  FourierVectorField field;
  field.height = mesh.h;
  for (int n1 = -window; n1 <= window; ++n1)
    for (int n2 = -window; n2 <= window; ++n2) {
      const double t1 =
          (lattice.alpha[0] * lattice.period1 + 2.0 * std::numbers::pi * n1) /
          L1;
      const double t2 =
          (lattice.alpha[1] * lattice.period2 + 2.0 * std::numbers::pi * n2) /
          L2;
      CVec3 acc = CVec3::Zero();
      for (int i1 = 0; i1 < L1; ++i1)
        for (int i2 = 0; i2 < L2; ++i2)
          acc += nodal[mesh.node_id(i1, i2, level)] *
                 std::exp(-iu * (t1 * i1 + t2 * i2));
      field.coeffs[ModeIndex{n1, n2}] = acc / double(L1 * L2);
    }
  return field;
}

FourierVectorField subtract_incident_trace(const FourierVectorField& total,
                                           const Incidence& inc) {
  FourierVectorField out = total;
  const CVec3 trace =
      inc.q.cast<Complex>() * std::exp(-iu * inc.beta * total.height);
  const auto [it, inserted] =
      out.coeffs.try_emplace(ModeIndex{0, 0}, CVec3::Zero());
  it->second -= trace;
  return out;
}

} // namespace elgrat
