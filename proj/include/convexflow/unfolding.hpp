#pragma once

#include <vector>

#include "convexflow/convex_body.hpp"

namespace convexflow {

/// A planar face of a convex polyhedron: coplanar hull triangles merged into
/// one convex polygon, vertices counter-clockwise seen from outside.
struct PolyFace {
  Vec3 normal;
  double offset = 0.0;
  std::vector<Vec3> corners;
};

std::vector<PolyFace> merge_coplanar(const ConvexBody& body);

/// Shortest surface path between two boundary points among paths crossing at
/// most `max_faces` faces, by enumerating face sequences and unfolding each
/// into the plane. Throws Error(BudgetExceeded) if no sequence connects them.
double unfold_polyhedron(const ConvexBody& body, const Vec3& a, const Vec3& b, int max_faces = 6);

/// Batch form sharing the merged faces.
std::vector<double> unfold_polyhedron(const ConvexBody& body, const std::vector<std::pair<Vec3, Vec3>>& pairs,
                                      int max_faces = 6);

}  // namespace convexflow
