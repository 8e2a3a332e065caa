#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "convexflow/convex_body.hpp"

namespace fixtures {

using convexflow::Vec3;

inline std::vector<Vec3> cube_corners(double half = 0.5) {
  std::vector<Vec3> p;
  for (int i = 0; i < 8; ++i) p.emplace_back(i & 1 ? half : -half, i & 2 ? half : -half, i & 4 ? half : -half);
  return p;
}

inline convexflow::ConvexBody cube(double half = 0.5) { return convexflow::convex_hull(cube_corners(half)); }

/// Fibonacci lattice on the sphere of radius r.
inline std::vector<Vec3> sphere_points(int n, double r = 1.0) {
  std::vector<Vec3> p;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double s = std::sqrt(1.0 - z * z);
    p.emplace_back(r * s * std::cos(golden * i), r * s * std::sin(golden * i), r * z);
  }
  return p;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

}  // namespace fixtures
