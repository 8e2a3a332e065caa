#pragma once

#include <vector>

#include "convexflow/convex_body.hpp"

namespace convexflow {

struct Edge {
  int v0, v1;  // v0 < v1
  int t0, t1;  // flanking triangles
};

/// Closed triangle-mesh connectivity.
struct Topology {
  int num_vertices = 0;
  std::vector<Tri> triangles;
  std::vector<Edge> edges;
  /// tri_edges[t][k] is the edge opposite corner k of triangle t.
  std::vector<std::array<int, 3>> tri_edges;
  /// CSR vertex -> incident triangles.
  std::vector<int> vt_offsets;
  std::vector<int> vt_list;
  /// CSR vertex -> neighbouring vertices (sorted).
  std::vector<int> vv_offsets;
  std::vector<int> vv_list;

  static Topology build(int num_vertices, std::vector<Tri> triangles);
  int euler_characteristic() const {
    return num_vertices - static_cast<int>(edges.size()) + static_cast<int>(triangles.size());
  }
};

/// Subdivided icosahedron with vertices on the unit sphere.
struct SphereMesh {
  int level = 0;
  std::vector<Vec3> directions;
  Topology topology;
};

/// Midpoint subdivision of the icosahedron, reprojected to the unit sphere.
/// Throws Error(LevelTooLarge) above level 8.
SphereMesh icosphere(int level);

/// Same connectivity, directions mapped by `rotation`.
SphereMesh rotated(const SphereMesh& mesh, const Mat3& rotation);

}  // namespace convexflow
