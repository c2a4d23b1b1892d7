// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "elgrat/modes.hpp"

namespace elgrat {

/// Axis-aligned box rising from the base plane.
struct BumpBox {
  double x1_lo = 0.0, x1_hi = 0.0;
  double x2_lo = 0.0, x2_hi = 0.0;
  double height = 0.0;
};

struct Geometry {
  std::vector<BumpBox> bumps;
  bool flat() const { return bumps.empty(); }
};

enum class Variant { Dtn, Pml };

enum class NodeClass : std::uint8_t { Free, Dirichlet, Slave, Excluded };

/// Conforming hexahedral lattice over one period cell. Nodes on the far
/// periodic faces are slaves of the near faces with a Bloch phase; nodes on
/// the scattering surface (and the top plane for the layer-truncated
/// variant) carry Dirichlet data; nodes buried inside bumps are excluded.
struct HexMesh {
  int n1 = 0, n2 = 0, n3 = 0; // elements per direction
  double period1 = 0.0, period2 = 0.0, z_top = 0.0;
  double h = 0.0; // trace plane elevation (a mesh plane)
  Variant variant = Variant::Pml;
  Geometry geometry;
  Vec2 bloch = Vec2::Zero();

  std::vector<NodeClass> node_class;
  std::vector<int> master_node;   // slave -> master node id (self otherwise)
  std::vector<Complex> phase;     // slave -> Bloch phase (1 otherwise)
  std::vector<int> free_block;    // master node -> free block index or -1
  std::vector<std::uint8_t> element_active;
  int free_node_count = 0;

  double dx1() const { return period1 / n1; }
  double dx2() const { return period2 / n2; }
  double dz() const { return z_top / n3; }
  int node_count() const { return (n1 + 1) * (n2 + 1) * (n3 + 1); }
  int node_id(int i1, int i2, int i3) const {
    return (i1 * (n2 + 1) + i2) * (n3 + 1) + i3;
  }
  int element_count() const { return n1 * n2 * n3; }
  int element_id(int e1, int e2, int e3) const {
    return (e1 * n2 + e2) * n3 + e3;
  }
  Vec3 node_position(int i1, int i2, int i3) const {
    return Vec3(i1 * dx1(), i2 * dx2(), i3 * dz());
  }
  int trace_level() const; // z index of the plane x3 = h
  bool is_free(int node) const { return node_class[node] == NodeClass::Free; }
};

HexMesh build_mesh(const Geometry& geometry, const Lattice& lattice, double h,
                   double delta, std::array<int, 3> resolution, Variant variant);

} // namespace elgrat
