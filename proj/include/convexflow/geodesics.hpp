#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "convexflow/intrinsic_mesh.hpp"
#include "convexflow/sphere_mesh.hpp"

namespace convexflow {

enum class DistanceMethod { FastMarching, Dijkstra, Unfolding };

const char* to_string(DistanceMethod method);

/// Fixed probe set of vertex pairs and their distances.
struct DistancePanel {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> values;
  DistanceMethod method = DistanceMethod::FastMarching;
};

struct MarchResult {
  std::vector<double> distance;
  /// Obtuse corners where virtual unfolding hit its depth limit; those
  /// updates fell back to edge (Dijkstra-style) updates.
  int unfolding_fallbacks = 0;
};

/// Single-source fast marching on current edge lengths. Triangle updates use a
/// virtual point source reconstructed from the two known corners; obtuse
/// corners are split by unfolding neighbouring triangles.
MarchResult fast_march_detailed(const IntrinsicMesh& mesh, int source, int max_unfold_depth = 8);
std::vector<double> fast_march(const IntrinsicMesh& mesh, int source);

/// Shortest paths on the 1-skeleton.
std::vector<double> dijkstra(const IntrinsicMesh& mesh, int source);

/// Fill values by fast marching from each distinct source, in parallel over
/// sources when jobs > 1. Output does not depend on jobs.
DistancePanel panel_eval(const IntrinsicMesh& mesh, const DistancePanel& panel, int jobs = 1);

/// `count` distinct pairs drawn from a fixed-seed generator, keeping only
/// pairs whose directions are at least `min_angle` apart.
std::vector<std::pair<int, int>> make_panel_pairs(const SphereMesh& mesh, int count, std::uint64_t seed,
                                                  double min_angle);

/// Index of the mesh direction closest to `direction`.
int nearest_direction(const SphereMesh& mesh, const Vec3& direction);

}  // namespace convexflow
