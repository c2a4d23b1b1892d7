// SPDX-License-Identifier: Apache-2.0
#include "elgrat/hexmesh.hpp"

#include <cmath>

namespace elgrat {

namespace {

bool is_grid_aligned(double value, double spacing) {
  const double q = value / spacing;
  return std::abs(q - std::round(q)) < 1e-9 * std::max(1.0, std::abs(q));
}

bool inside_open_box(const BumpBox& b, const Vec3& p) {
  return p[0] > b.x1_lo && p[0] < b.x1_hi && p[1] > b.x2_lo &&
         p[1] < b.x2_hi && p[2] < b.height;
}

bool inside_closed_box(const BumpBox& b, const Vec3& p, double tol) {
  return p[0] >= b.x1_lo - tol && p[0] <= b.x1_hi + tol &&
         p[1] >= b.x2_lo - tol && p[1] <= b.x2_hi + tol &&
         p[2] <= b.height + tol;
}

} // namespace

int HexMesh::trace_level() const {
  const double level = h / dz();
  const int l = int(std::round(level));
  if (std::abs(level - l) > 1e-9 || l < 0 || l > n3)
    throw ParameterError("hexmesh: trace plane is not a mesh plane");
  return l;
}

HexMesh build_mesh(const Geometry& geometry, const Lattice& lattice, double h,
                   double delta, std::array<int, 3> resolution,
                   Variant variant) {
  HexMesh mesh;
  mesh.n1 = resolution[0];
  mesh.n2 = resolution[1];
  mesh.n3 = resolution[2];
  if (mesh.n1 < 1 || mesh.n2 < 1 || mesh.n3 < 2)
    throw ParameterError("build_mesh: resolution too small");
  mesh.period1 = lattice.period1;
  mesh.period2 = lattice.period2;
  mesh.h = h;
  mesh.z_top = variant == Variant::Pml ? h + delta : h;
  mesh.variant = variant;
  mesh.geometry = geometry;
  mesh.bloch = lattice.alpha;
  if (!(h > 0.0) || (variant == Variant::Pml && !(delta > 0.0)))
    throw ParameterError("build_mesh: invalid h or layer thickness");
  if (!is_grid_aligned(h, mesh.dz()))
    throw ParameterError("build_mesh: h must lie on a mesh plane");

  const double tol = 1e-9 * std::max({mesh.dx1(), mesh.dx2(), mesh.dz()});
  for (const BumpBox& b : geometry.bumps) {
    if (!(b.x1_hi > b.x1_lo) || !(b.x2_hi > b.x2_lo) || !(b.height > 0.0))
      throw ParameterError("build_mesh: degenerate bump box");
    if (!(b.x1_lo > 0.0) || !(b.x1_hi < mesh.period1) || !(b.x2_lo > 0.0) ||
        !(b.x2_hi < mesh.period2))
      throw ParameterError(
          "build_mesh: bumps must sit strictly inside the period cell");
    if (!(b.height < h))
      throw ParameterError("build_mesh: bump must stay below the trace plane");
    if (!is_grid_aligned(b.x1_lo, mesh.dx1()) ||
        !is_grid_aligned(b.x1_hi, mesh.dx1()) ||
        !is_grid_aligned(b.x2_lo, mesh.dx2()) ||
        !is_grid_aligned(b.x2_hi, mesh.dx2()) ||
        !is_grid_aligned(b.height, mesh.dz()))
      throw ParameterError(
          "build_mesh: bump faces must lie on mesh planes (unresolved bump)");
  }

  mesh.element_active.assign(mesh.element_count(), 1);
  for (int e1 = 0; e1 < mesh.n1; ++e1)
    for (int e2 = 0; e2 < mesh.n2; ++e2)
      for (int e3 = 0; e3 < mesh.n3; ++e3) {
        const Vec3 center((e1 + 0.5) * mesh.dx1(), (e2 + 0.5) * mesh.dx2(),
                          (e3 + 0.5) * mesh.dz());
        for (const BumpBox& b : geometry.bumps)
          if (inside_open_box(b, center)) {
            mesh.element_active[mesh.element_id(e1, e2, e3)] = 0;
            break;
          }
      }

  const int nodes = mesh.node_count();
  mesh.node_class.assign(nodes, NodeClass::Free);
  mesh.master_node.resize(nodes);
  mesh.phase.assign(nodes, Complex(1.0, 0.0));
  mesh.free_block.assign(nodes, -1);

  const Complex phase1 = std::exp(iu * lattice.alpha[0] * lattice.period1);
  const Complex phase2 = std::exp(iu * lattice.alpha[1] * lattice.period2);

  for (int i1 = 0; i1 <= mesh.n1; ++i1)
    for (int i2 = 0; i2 <= mesh.n2; ++i2)
      for (int i3 = 0; i3 <= mesh.n3; ++i3) {
        const int id = mesh.node_id(i1, i2, i3);
        // geometric pairing of the far periodic faces, kept independently of
        // the Dirichlet classification
        mesh.master_node[id] = id;
        if (i1 == mesh.n1 || i2 == mesh.n2) {
          const int m1 = i1 == mesh.n1 ? 0 : i1;
          const int m2 = i2 == mesh.n2 ? 0 : i2;
          mesh.master_node[id] = mesh.node_id(m1, m2, i3);
          Complex ph(1.0, 0.0);
          if (i1 == mesh.n1) ph *= phase1;
          if (i2 == mesh.n2) ph *= phase2;
          mesh.phase[id] = ph;
        }

        bool touches_active = false;
        for (int d1 = -1; d1 <= 0 && !touches_active; ++d1)
          for (int d2 = -1; d2 <= 0 && !touches_active; ++d2)
            for (int d3 = -1; d3 <= 0 && !touches_active; ++d3) {
              const int e1 = i1 + d1, e2 = i2 + d2, e3 = i3 + d3;
              if (e1 < 0 || e1 >= mesh.n1 || e2 < 0 || e2 >= mesh.n2 ||
                  e3 < 0 || e3 >= mesh.n3)
                continue;
              if (mesh.element_active[mesh.element_id(e1, e2, e3)])
                touches_active = true;
            }
        if (!touches_active) {
          mesh.node_class[id] = NodeClass::Excluded;
          continue;
        }

        const Vec3 p = mesh.node_position(i1, i2, i3);
        bool dirichlet = i3 == 0;
        if (variant == Variant::Pml && i3 == mesh.n3) dirichlet = true;
        for (const BumpBox& b : geometry.bumps)
          if (inside_closed_box(b, p, tol)) dirichlet = true;
        if (dirichlet) {
          mesh.node_class[id] = NodeClass::Dirichlet;
          continue;
        }

        if (i1 == mesh.n1 || i2 == mesh.n2)
          mesh.node_class[id] = NodeClass::Slave;
      }

  mesh.free_node_count = 0;
  for (int id = 0; id < nodes; ++id)
    if (mesh.node_class[id] == NodeClass::Free)
      mesh.free_block[id] = mesh.free_node_count++;
  return mesh;
}

} // namespace elgrat
