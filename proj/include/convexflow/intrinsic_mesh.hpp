#pragma once

#include <memory>
#include <span>
#include <vector>

#include "convexflow/sphere_mesh.hpp"

namespace convexflow {

/// A closed triangulated surface described intrinsically: base edge lengths
/// (the initial metric) and a per-vertex conformal factor u. Current lengths
/// are exp((u_i + u_j) / 2) * base_length, so a constant u scales the metric
/// by exp(2u).
class IntrinsicMesh {
 public:
  IntrinsicMesh() = default;
  IntrinsicMesh(std::shared_ptr<const Topology> topology, std::vector<double> base_lengths);

  /// Base lengths are Euclidean edge lengths of the given embedding.
  static IntrinsicMesh from_positions(std::shared_ptr<const Topology> topology,
                                      const std::vector<Vec3>& positions);

  const Topology& topology() const { return *topology_; }
  const std::shared_ptr<const Topology>& shared_topology() const { return topology_; }
  int num_vertices() const { return topology_->num_vertices; }
  int num_edges() const { return static_cast<int>(topology_->edges.size()); }
  int num_triangles() const { return static_cast<int>(topology_->triangles.size()); }

  const std::vector<double>& base_lengths() const { return base_lengths_; }
  const std::vector<double>& conformal() const { return u_; }
  /// Replace u and recompute all derived quantities.
  void set_conformal(std::vector<double> u);
  /// Same as set_conformal but reuses the existing storage.
  void assign_conformal(std::span<const double> u);

  const std::vector<double>& lengths() const { return lengths_; }
  /// Corner angles, three per triangle, in triangle vertex order.
  const std::vector<std::array<double, 3>>& angles() const { return angles_; }
  const std::vector<double>& triangle_areas() const { return tri_area_; }
  const std::vector<double>& vertex_areas() const { return vertex_area_; }
  const std::vector<double>& angle_defects() const { return defect_; }
  const std::vector<double>& curvature() const { return curvature_; }

  double total_area() const { return total_area_; }
  double defect_sum() const { return defect_sum_; }
  /// min over corners of (b + c - a) / (a + b + c).
  double min_margin() const { return min_margin_; }

  double edge_length(int a, int b) const;

  void recompute();

 private:
  std::shared_ptr<const Topology> topology_;
  std::vector<double> base_lengths_;
  std::vector<double> u_;

  std::vector<double> lengths_;
  std::vector<std::array<double, 3>> angles_;
  std::vector<double> tri_area_;
  std::vector<double> vertex_area_;
  std::vector<double> defect_;
  std::vector<double> curvature_;
  double total_area_ = 0.0;
  double defect_sum_ = 0.0;
  double min_margin_ = 0.0;
};

/// Neumaier-compensated sum in index order.
double compensated_sum(const std::vector<double>& values);

}  // namespace convexflow
