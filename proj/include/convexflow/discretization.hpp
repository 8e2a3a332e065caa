#pragma once

#include <vector>

#include <Eigen/Core>

#include "convexflow/convex_body.hpp"
#include "convexflow/intrinsic_mesh.hpp"
#include "convexflow/smoothing.hpp"
#include "convexflow/sphere_mesh.hpp"

namespace convexflow {

/// Radial function rho > 0 sampled at the directions of a SphereMesh,
/// measured from `center`.
struct RadialField {
  Vec3 center = Vec3::Zero();
  std::vector<double> rho;

  std::vector<double> reciprocal() const;
};

/// Exact ray casting against the hull.
RadialField sample_radial(const ConvexBody& body, const SphereMesh& mesh);

/// Radial function of the body whose support function is `field`:
/// rho(d) = min over normals n with <d, n> > 0 of h(n) / <d, n>, located by a
/// grid search over the quadrature directions followed by Newton iterations on
/// the sphere.
RadialField sample_radial(const SupportField& field, const SphereMesh& mesh);

RadialField constant_radial(const SphereMesh& mesh, double radius);
RadialField ellipsoid_radial(const SphereMesh& mesh, const Vec3& semiaxes);

std::vector<Vec3> embedded_positions(const RadialField& field, const SphereMesh& mesh);

/// Radial graph over the mesh directions, with u = 0.
/// Throws Error(DegenerateTriangle) if a triangle-inequality margin is < 1e-12.
IntrinsicMesh embed(const RadialField& field, const SphereMesh& mesh);

/// Chord lengths |d_i - d_j| of the unit sphere mesh, per edge.
std::vector<double> round_edge_lengths(const SphereMesh& mesh);

/// Local quadratic fit of a per-vertex scalar in geodesic normal coordinates.
struct LocalJet {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  double condition = 0.0;
};

/// Weighted least squares over the `rings`-ring of `vertex`.
/// Throws Error(IllConditionedStencil) when the scaled design matrix has
/// condition number above 1e8.
LocalJet local_jet(const SphereMesh& mesh, const std::vector<double>& values, int vertex, int rings = 2);

struct SmoothMetric {
  Eigen::Matrix2d metric;          // rho^2 I + grad rho grad rho^T
  Eigen::Matrix2d second_form;     // (rho^2 I + 2 grad grad^T - rho Hess) / sqrt(rho^2 + |grad|^2)
  double gauss_curvature = 0.0;    // det(second_form) / det(metric)
};

/// Induced metric, second fundamental form and Gauss curvature of the radial
/// graph at a vertex, from derivatives of rho with respect to the round metric.
SmoothMetric smooth_metric_at(const RadialField& field, const SphereMesh& mesh, int vertex, int rings = 2);

struct ReciprocalGradientBound {
  double max_combined = 0.0;  // max |grad v|^2 + v^2, v = 1/rho
  double max_vsq = 0.0;       // max v^2
};

/// For convex radial graphs max(|grad v|^2 + v^2) <= max v^2.
ReciprocalGradientBound reciprocal_gradient_bound(const RadialField& field, const SphereMesh& mesh,
                                                  int rings = 2);

}  // namespace convexflow
