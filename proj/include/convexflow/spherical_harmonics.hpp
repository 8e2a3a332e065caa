#pragma once

#include <span>
#include <vector>

#include "convexflow/convex_body.hpp"

namespace convexflow {

/// Real orthonormal spherical harmonics, packed as index(l, m) = l*l + l + m.
///
/// The associated Legendre part is carried without its sin^m factor, which is
/// folded into Re/Im (x + iy)^m. Evaluation therefore has no pole singularity.
class ShBasis {
 public:
  explicit ShBasis(int lmax);

  int lmax() const { return lmax_; }
  int size() const { return (lmax_ + 1) * (lmax_ + 1); }
  static int index(int l, int m) { return l * l + l + m; }

  /// All basis values at a unit vector; `out.size() == size()`.
  void evaluate(const Vec3& unit, std::span<double> out) const;

  /// sum_k coeffs[k] * Y_k(unit) without materializing the basis.
  double sum(std::span<const double> coeffs, const Vec3& unit) const;

 private:
  int lmax_;
  std::vector<double> a_;  // recurrence factors, packed like the basis
  std::vector<double> b_;
  std::vector<double> diag_;  // Q_m^m / Q_{m-1}^{m-1}
};

/// Gauss-Legendre in cos(theta) times a uniform longitude grid.
/// `level` latitude nodes and 2*level longitudes integrate polynomials of
/// degree <= 2*level - 1 exactly.
struct SphereQuadrature {
  int level = 0;
  std::vector<Vec3> nodes;  // unit vectors in the local frame
  std::vector<double> weights;
};

SphereQuadrature gauss_legendre_sphere(int level);

/// Orthonormal tangent basis (e1, e2) at unit vector n, with e1 x e2 = n.
void tangent_frame(const Vec3& n, Vec3& e1, Vec3& e2);

/// Exponential map of the unit sphere at n in the tangent direction a*e1 + b*e2.
Vec3 sphere_exp(const Vec3& n, const Vec3& e1, const Vec3& e2, double a, double b);

}  // namespace convexflow
