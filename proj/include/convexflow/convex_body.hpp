#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace convexflow {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Tri = std::array<int, 3>;

/// Convex hull of a point cloud together with an interior base point.
///
/// Facets are oriented triangles with outward normals. Coplanar hull faces
/// (e.g. the squares of a cube) are triangulated. The object is immutable
/// after construction.
class ConvexBody {
 public:
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Tri>& facets() const { return facets_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  /// Plane offsets: normals()[f].dot(x) <= offsets()[f] for interior x.
  const std::vector<double>& offsets() const { return offsets_; }

  const Vec3& center() const { return center_; }
  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }
  double diameter() const;

  /// max over hull vertices of <vertex - center, direction>.
  double support(const Vec3& direction) const;

  /// Distance from center to the boundary along `direction` (ray casting).
  /// Throws Error(NoIntersection) if no facet faces the ray.
  double radial(const Vec3& direction) const;

  /// Largest ball around `x` contained in the body (negative outside).
  double facet_clearance(const Vec3& x) const;

 private:
  friend ConvexBody convex_hull(std::span<const Vec3> points);

  std::vector<Vec3> vertices_;
  std::vector<Tri> facets_;
  std::vector<Vec3> normals_;
  std::vector<double> offsets_;
  Vec3 center_ = Vec3::Zero();
  double inradius_ = 0.0;
  double circumradius_ = 0.0;
};

/// Incremental 3D hull with lexicographically sorted insertion order.
/// Throws Error(DegenerateInput) for fewer than 4 points or coplanar input.
ConvexBody convex_hull(std::span<const Vec3> points);

/// Returns the inradius; throws Error(Degenerate) when it is below
/// `r_min_relative * circumradius`.
double nondegeneracy(const ConvexBody& body, double r_min_relative = 1e-6);

/// Apply x -> rotation * x + translation to the hull vertices and re-hull.
ConvexBody transformed(const ConvexBody& body, const Mat3& rotation,
                       const Vec3& translation = Vec3::Zero());

}  // namespace convexflow
