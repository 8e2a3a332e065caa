#include "convexflow/sphere_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "convexflow/error.hpp"

namespace convexflow {

Topology Topology::build(int num_vertices, std::vector<Tri> triangles) {
  Topology topo;
  topo.num_vertices = num_vertices;
  topo.triangles = std::move(triangles);
  const int nt = static_cast<int>(topo.triangles.size());
  topo.tri_edges.resize(nt);

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(static_cast<std::size_t>(nt) * 2);
  for (int t = 0; t < nt; ++t) {
    const Tri& tri = topo.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
      auto [it, inserted] = index.try_emplace(key, static_cast<int>(topo.edges.size()));
      if (inserted) {
        topo.edges.push_back({a, b, t, -1});
      } else {
        topo.edges[it->second].t1 = t;
      }
      topo.tri_edges[t][k] = it->second;
    }
  }

  std::vector<int> count(num_vertices + 1, 0);
  for (const auto& tri : topo.triangles)
    for (int v : tri) ++count[v + 1];
  for (int v = 0; v < num_vertices; ++v) count[v + 1] += count[v];
  topo.vt_offsets = count;
  topo.vt_list.assign(count.back(), 0);
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (int t = 0; t < nt; ++t)
    for (int v : topo.triangles[t]) topo.vt_list[fill[v]++] = t;

  std::vector<std::vector<int>> nbrs(num_vertices);
  for (const auto& e : topo.edges) {
    nbrs[e.v0].push_back(e.v1);
    nbrs[e.v1].push_back(e.v0);
  }
  topo.vv_offsets.assign(num_vertices + 1, 0);
  for (int v = 0; v < num_vertices; ++v) {
    std::sort(nbrs[v].begin(), nbrs[v].end());
    topo.vv_offsets[v + 1] = topo.vv_offsets[v] + static_cast<int>(nbrs[v].size());
  }
  topo.vv_list.reserve(topo.vv_offsets.back());
  for (const auto& n : nbrs) topo.vv_list.insert(topo.vv_list.end(), n.begin(), n.end());
  return topo;
}

SphereMesh icosphere(int level) {
  if (level < 0 || level > 8) throw Error(Errc::LevelTooLarge, "icosphere level " + std::to_string(level));
  const double phi = std::numbers::phi;
  std::vector<Vec3> base;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      base.emplace_back(0.0, s1, s2 * phi);
      base.emplace_back(s1, s2 * phi, 0.0);
      base.emplace_back(s2 * phi, 0.0, s1);
    }
  for (auto& v : base) v.normalize();
  const ConvexBody ico = convex_hull(base);

  std::vector<Vec3> dirs = ico.vertices();
  std::vector<Tri> tris = ico.facets();
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      dirs.push_back((dirs[a] + dirs[b]).normalized());
      const int id = static_cast<int>(dirs.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<Tri> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int ab = midpoint(t[0], t[1]);
      const int bc = midpoint(t[1], t[2]);
      const int ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  SphereMesh mesh;
  mesh.level = level;
  mesh.topology = Topology::build(static_cast<int>(dirs.size()), std::move(tris));
  mesh.directions = std::move(dirs);
  return mesh;
}

SphereMesh rotated(const SphereMesh& mesh, const Mat3& rotation) {
  SphereMesh out = mesh;
  for (auto& d : out.directions) d = (rotation * d).normalized();
  return out;
}

}  // namespace convexflow
