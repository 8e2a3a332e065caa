#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <string>

#include "convexflow/discretization.hpp"
#include "convexflow/error.hpp"
#include "convexflow/geodesics.hpp"
#include "convexflow/unfolding.hpp"
#include "fixtures.hpp"

using namespace convexflow;

namespace {

IntrinsicMesh sphere_mesh(int level, double radius = 1.0) {
  const SphereMesh m = icosphere(level);
  return embed(constant_radial(m, radius), m);
}

}  // namespace

TEST_CASE("antipodal distance on the unit sphere") {
  const SphereMesh m = icosphere(6);
  const IntrinsicMesh mesh = embed(constant_radial(m, 1.0), m);
  const int a = nearest_direction(m, Vec3::UnitX());
  const int b = nearest_direction(m, -Vec3::UnitX());
  const MarchResult r = fast_march_detailed(mesh, a);
  CHECK(r.distance[b] == doctest::Approx(std::numbers::pi).epsilon(0.01));
  CHECK(r.distance[a] == 0.0);
}

TEST_CASE("fast marching approaches great circles") {
  const SphereMesh m = icosphere(5);
  const IntrinsicMesh mesh = embed(constant_radial(m, 1.0), m);
  const std::vector<double> d = fast_march(mesh, 0);
  double worst = 0.0;
  for (int i = 1; i < m.topology.num_vertices; ++i) {
    const double exact = std::acos(std::clamp(m.directions[0].dot(m.directions[i]), -1.0, 1.0));
    if (exact > 0.3) worst = std::max(worst, std::abs(d[i] / exact - 1.0));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("distances scale with the metric") {
  const IntrinsicMesh a = sphere_mesh(3, 1.0);
  const IntrinsicMesh b = sphere_mesh(3, 2.5);
  const std::vector<double> da = fast_march(a, 5);
  const std::vector<double> db = fast_march(b, 5);
  for (std::size_t i = 0; i < da.size(); ++i) CHECK(db[i] == doctest::Approx(2.5 * da[i]));
}

TEST_CASE("fast marching never exceeds graph distance") {
  const SphereMesh m = icosphere(4);
  const IntrinsicMesh mesh = embed(ellipsoid_radial(m, Vec3(1.0, 0.7, 1.4)), m);
  const std::vector<double> f = fast_march(mesh, 3);
  const std::vector<double> g = dijkstra(mesh, 3);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] <= g[i] + 1e-12);
}

TEST_CASE("dijkstra sums edges") {
  const SphereMesh m = icosphere(0);
  const IntrinsicMesh mesh = embed(constant_radial(m, 1.0), m);
  const std::vector<double> d = dijkstra(mesh, 0);
  const double edge = mesh.lengths()[0];
  int ones = 0, twos = 0, threes = 0;
  for (int i = 1; i < 12; ++i) {
    if (std::abs(d[i] - edge) < 1e-12) ++ones;
    if (std::abs(d[i] - 2 * edge) < 1e-12) ++twos;
    if (std::abs(d[i] - 3 * edge) < 1e-12) ++threes;
  }
  CHECK(ones == 5);
  CHECK(twos == 5);
  CHECK(threes == 1);
}

TEST_CASE("symmetry and triangle inequality hold to discretization accuracy") {
  const SphereMesh m = icosphere(4);
  const IntrinsicMesh mesh = embed(ellipsoid_radial(m, Vec3(1.0, 0.8, 1.3)), m);
  const int n[3] = {0, 77, 1500};
  std::vector<std::vector<double>> d;
  for (int s : n) d.push_back(fast_march(mesh, s));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(d[i][n[j]] == doctest::Approx(d[j][n[i]]).epsilon(0.01));
      for (int k = 0; k < 3; ++k) CHECK(d[i][n[k]] <= (d[i][n[j]] + d[j][n[k]]) * 1.01);
    }
}

TEST_CASE("panel evaluation") {
  const SphereMesh m = icosphere(4);
  const IntrinsicMesh mesh = embed(ellipsoid_radial(m, Vec3(1.0, 1.0, 1.5)), m);
  DistancePanel panel;
  panel.pairs = make_panel_pairs(m, 20, 42, std::numbers::pi / 6);
  panel.pairs.push_back({9, 9});
  const DistancePanel one = panel_eval(mesh, panel, 1);
  const DistancePanel three = panel_eval(mesh, panel, 3);
  CHECK(one.values == three.values);
  CHECK(one.values.back() == 0.0);
  CHECK(panel_eval(mesh, panel, 1).values == one.values);
  for (std::size_t k = 0; k + 1 < panel.pairs.size(); ++k)
    CHECK(one.values[k] == fast_march(mesh, panel.pairs[k].first)[panel.pairs[k].second]);
}

TEST_CASE("panel pairs are distinct, spread and reproducible") {
  const SphereMesh m = icosphere(3);
  const auto a = make_panel_pairs(m, 30, 7, std::numbers::pi / 6);
  const auto b = make_panel_pairs(m, 30, 7, std::numbers::pi / 6);
  CHECK(a == b);
  CHECK(a.size() == 30);
  std::set<std::pair<int, int>> seen;
  for (auto [i, j] : a) {
    CHECK(i != j);
    CHECK(seen.insert({std::min(i, j), std::max(i, j)}).second);
    CHECK(std::acos(m.directions[i].dot(m.directions[j])) >= std::numbers::pi / 6);
  }
  CHECK(make_panel_pairs(m, 30, 8, std::numbers::pi / 6) != a);
}

TEST_CASE("method names") {
  CHECK(std::string(to_string(DistanceMethod::FastMarching)) == "fast_marching");
  CHECK(std::string(to_string(DistanceMethod::Dijkstra)) == "dijkstra");
  CHECK(std::string(to_string(DistanceMethod::Unfolding)) == "unfolding");
}

TEST_CASE("unfolding on the unit cube") {
  const ConvexBody cube = fixtures::cube();
  SUBCASE("across one edge") {
    CHECK(unfold_polyhedron(cube, Vec3(0, 0, 0.5), Vec3(0.5, 0, 0)) == doctest::Approx(1.0));
  }
  SUBCASE("opposite corners") {
    CHECK(unfold_polyhedron(cube, Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)) == doctest::Approx(std::sqrt(5.0)));
  }
  SUBCASE("opposite face centres") {
    CHECK(unfold_polyhedron(cube, Vec3(0, 0, 0.5), Vec3(0, 0, -0.5)) == doctest::Approx(2.0));
  }
  SUBCASE("same face is Euclidean") {
    const Vec3 a(0.1, -0.2, 0.5), b(-0.3, 0.4, 0.5);
    CHECK(unfold_polyhedron(cube, a, b) == doctest::Approx((a - b).norm()));
  }
  SUBCASE("face budget") {
    CHECK_THROWS_AS(unfold_polyhedron(cube, Vec3(0, 0, 0.5), Vec3(0, 0, -0.5), 2), Error);
  }
  SUBCASE("batch matches single calls") {
    const std::vector<std::pair<Vec3, Vec3>> pairs{{Vec3(0, 0, 0.5), Vec3(0.5, 0, 0)},
                                                    {Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)}};
    const std::vector<double> d = unfold_polyhedron(cube, pairs);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(std::sqrt(5.0)));
  }
}

TEST_CASE("coplanar triangles merge into faces") {
  const std::vector<PolyFace> faces = merge_coplanar(fixtures::cube());
  CHECK(faces.size() == 6);
  for (const PolyFace& f : faces) {
    CHECK(f.corners.size() == 4);
    CHECK(f.offset == doctest::Approx(0.5));
  }
}

TEST_CASE("unfolding on a regular tetrahedron") {
  const std::vector<Vec3> p{Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  const ConvexBody tet = convex_hull(p);
  // Midpoints of opposite edges: the shortest path crosses two faces.
  const Vec3 a = 0.5 * (p[0] + p[1]);
  const Vec3 b = 0.5 * (p[2] + p[3]);
  const double side = (p[0] - p[1]).norm();
  CHECK(unfold_polyhedron(tet, a, b) == doctest::Approx(side));
  CHECK(unfold_polyhedron(tet, p[0], p[1]) == doctest::Approx(side));
}

TEST_CASE("fast marching on the cube approaches unfolding") {
  const ConvexBody cube = fixtures::cube();
  const SphereMesh m = icosphere(6);
  const IntrinsicMesh mesh = embed(sample_radial(cube, m), m);
  const int a = nearest_direction(m, Vec3::UnitZ());
  const int b = nearest_direction(m, Vec3::UnitX());
  CHECK(fast_march(mesh, a)[b] == doctest::Approx(1.0).epsilon(0.01));
}
