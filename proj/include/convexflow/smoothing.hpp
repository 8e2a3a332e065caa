#pragma once

#include <memory>
#include <vector>

#include "convexflow/convex_body.hpp"
#include "convexflow/spherical_harmonics.hpp"

namespace convexflow {

/// Support function of a convex body, relative to `center`, as a truncated
/// real spherical-harmonic series in the local frame `frame` (columns are the
/// local axes in world coordinates).
struct SupportField {
  int lmax = 0;
  int quadrature_level = 0;
  std::vector<double> coefficients;
  Vec3 center = Vec3::Zero();
  Mat3 frame = Mat3::Identity();
  /// min over quadrature directions of the smallest eigenvalue of
  /// Hess h + h I on the tangent plane.
  double margin = 0.0;
  /// Total radius added to the degree-0 term by margin_repair.
  double shift = 0.0;
  /// sup |h - h_lmax| at quadrature nodes, measured at projection time.
  double reconstruction_error = 0.0;

  double evaluate(const Vec3& world_direction) const;
  double mean_support() const;
  const ShBasis& basis() const;

 private:
  mutable std::shared_ptr<const ShBasis> basis_;
};

/// Quadrature level used when the caller passes 0.
int default_quadrature_level(int lmax);

/// Project direction -> body.support(direction) onto degrees <= lmax.
/// Throws Error(QuadratureTooCoarse) if quadrature_level < lmax + 1.
SupportField project_support(const ConvexBody& body, int lmax, int quadrature_level = 0,
                             const Mat3& frame = Mat3::Identity());

/// Scale coefficient (l, m) by exp(-l(l+1) epsilon) and re-measure the margin.
SupportField heat_mollify(const SupportField& field, double epsilon);

/// Default convexity floor: 1e-3 times the mean support.
double default_mu_min(const SupportField& field);

/// Minkowski-add a ball so that the measured margin is at least mu_min.
/// A negative mu_min selects default_mu_min(field).
SupportField margin_repair(const SupportField& field, double mu_min = -1.0);

/// Smallest tangential eigenvalue of Hess h + h I over the quadrature grid,
/// using central differences with step 1e-4 rad in geodesic normal coordinates.
double measure_margin(const SupportField& field);

/// sup over an icosphere direction grid of |h_a - h_b| (world supports).
double hausdorff_distance(const SupportField& a, const SupportField& b, int grid_level = 5);
double hausdorff_distance(const SupportField& a, const ConvexBody& b, int grid_level = 5);

}  // namespace convexflow
