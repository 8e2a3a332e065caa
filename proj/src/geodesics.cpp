#include "convexflow/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <set>

#include <Eigen/Core>

namespace convexflow {

const char* to_string(DistanceMethod method) {
  switch (method) {
    case DistanceMethod::FastMarching: return "fast_marching";
    case DistanceMethod::Dijkstra: return "dijkstra";
    case DistanceMethod::Unfolding: return "unfolding";
  }
  return "unknown";
}

namespace {

using V2 = Eigen::Vector2d;
constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const V2& a, const V2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Third corner of a triangle with base p->q, at distances dp, dq, placed on
// the side of line pq given by `side` (+1 left, -1 right).
V2 place(const V2& p, const V2& q, double dp, double dq, double side) {
  const V2 e = q - p;
  const double c = e.norm();
  const V2 ex = e / c;
  const V2 ey(-ex.y(), ex.x());
  const double x = (dp * dp + c * c - dq * dq) / (2.0 * c);
  const double y = std::sqrt(std::max(0.0, dp * dp - x * x));
  return p + x * ex + side * y * ey;
}

// Distance at x from a virtual point source S on the far side of segment pq
// with |S - p| = tp and |S - q| = tq. Valid only when S->x crosses pq.
double point_source_update(const V2& p, double tp, const V2& q, double tq, const V2& x) {
  if (!std::isfinite(tp) || !std::isfinite(tq)) return kInf;
  const V2 e = q - p;
  const double c = e.norm();
  const V2 ex = e / c;
  V2 ey(-ex.y(), ex.x());
  double yx = (x - p).dot(ey);
  if (yx < 0) {
    ey = -ey;
    yx = -yx;
  }
  const double xs = (tp * tp + c * c - tq * tq) / (2.0 * c);
  const double ys2 = tp * tp - xs * xs;
  if (ys2 < 0.0) return kInf;
  const double ys = std::sqrt(ys2);
  const double xx = (x - p).dot(ex);
  const double denom = ys + yx;
  if (denom <= 0.0) return kInf;
  const double cross_at = xs + (xx - xs) * ys / denom;
  const double tol = 1e-12 * c;
  if (cross_at < -tol || cross_at > c + tol) return kInf;
  const double t = std::hypot(xx - xs, yx + ys);
  if (t < std::max(tp, tq)) return kInf;
  return t;
}

struct Marcher {
  const IntrinsicMesh& mesh;
  const Topology& topo;
  std::vector<double> dist;
  std::vector<char> accepted;
  int max_depth;
  int fallbacks = 0;

  double len(int t, int corner) const { return mesh.lengths()[topo.tri_edges[t][corner]]; }

  int corner_of(int t, int v) const {
    const Tri& tri = topo.triangles[t];
    return tri[0] == v ? 0 : (tri[1] == v ? 1 : 2);
  }

  // Length of the edge between two corners of triangle t.
  double side(int t, int ca, int cb) const { return len(t, 3 - ca - cb); }

  // Update target corner ck of triangle t from its two other corners.
  double triangle_update(int t, int ck) {
    const Tri& tri = topo.triangles[t];
    const int ci = (ck + 1) % 3, cj = (ck + 2) % 3;
    const int i = tri[ci], j = tri[cj];
    if (!accepted[i] || !accepted[j]) return kInf;
    const double lij = side(t, ci, cj), lik = side(t, ci, ck), ljk = side(t, cj, ck);
    const V2 pi(0.0, 0.0), pj(lij, 0.0);
    const V2 pk = place(pi, pj, lik, ljk, 1.0);
    const double cos_k = (lik * lik + ljk * ljk - lij * lij) / (2.0 * lik * ljk);
    if (cos_k >= 0.0) return point_source_update(pi, dist[i], pj, dist[j], pk);

    // Obtuse at k: walk across edge ij until a vertex falls inside the cone.
    int from_tri = t;
    int a = i, b = j;
    V2 pa = pi, pb = pj;
    for (int depth = 0; depth < max_depth; ++depth) {
      const int e = topo.tri_edges[from_tri][3 - corner_of(from_tri, a) - corner_of(from_tri, b)];
      const Edge& ed = topo.edges[e];
      const int next = ed.t0 == from_tri ? ed.t1 : ed.t0;
      if (next < 0) break;
      const int cm = 3 - corner_of(next, a) - corner_of(next, b);
      const int m = topo.triangles[next][cm];
      const double lam = side(next, corner_of(next, a), cm);
      const double lbm = side(next, corner_of(next, b), cm);
      // Far side of ab from k.
      const double s = cross2(pb - pa, pk - pa) > 0 ? -1.0 : 1.0;
      const V2 pm = place(pa, pb, lam, lbm, s);
      const double ci_m = cross2(pi - pk, pm - pk);
      const double cm_j = cross2(pm - pk, pj - pk);
      const double orient = cross2(pi - pk, pj - pk);
      const bool after_i = ci_m * orient >= 0.0;
      const bool before_j = cm_j * orient >= 0.0;
      if (after_i && before_j) {
        if (!accepted[m]) return kInf;
        return std::min(point_source_update(pi, dist[i], pm, dist[m], pk),
                        point_source_update(pm, dist[m], pj, dist[j], pk));
      }
      from_tri = next;
      if (!after_i) {
        a = m;
        pa = pm;
      } else {
        b = m;
        pb = pm;
      }
    }
    ++fallbacks;
    return kInf;
  }
};

}  // namespace

MarchResult fast_march_detailed(const IntrinsicMesh& mesh, int source, int max_unfold_depth) {
  const Topology& topo = mesh.topology();
  Marcher mr{mesh, topo, std::vector<double>(topo.num_vertices, kInf),
             std::vector<char>(topo.num_vertices, 0), max_unfold_depth};
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  mr.dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (mr.accepted[v] || d > mr.dist[v]) continue;
    mr.accepted[v] = 1;
    for (int k = topo.vt_offsets[v]; k < topo.vt_offsets[v + 1]; ++k) {
      const int t = topo.vt_list[k];
      const int cv = mr.corner_of(t, v);
      for (int step = 1; step <= 2; ++step) {
        const int cx = (cv + step) % 3;
        const int x = topo.triangles[t][cx];
        if (mr.accepted[x]) continue;
        double cand = d + mr.side(t, cv, cx);
        cand = std::min(cand, mr.triangle_update(t, cx));
        if (cand < mr.dist[x]) {
          mr.dist[x] = cand;
          heap.emplace(cand, x);
        }
      }
    }
  }
  return {std::move(mr.dist), mr.fallbacks};
}

std::vector<double> fast_march(const IntrinsicMesh& mesh, int source) {
  return fast_march_detailed(mesh, source).distance;
}

std::vector<double> dijkstra(const IntrinsicMesh& mesh, int source) {
  const Topology& topo = mesh.topology();
  std::vector<double> dist(topo.num_vertices, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (int k = topo.vt_offsets[v]; k < topo.vt_offsets[v + 1]; ++k) {
      const int t = topo.vt_list[k];
      const Tri& tri = topo.triangles[t];
      for (int c = 0; c < 3; ++c) {
        if (tri[c] != v) continue;
        for (int step = 1; step <= 2; ++step) {
          const int cx = (c + step) % 3;
          const int x = tri[cx];
          const double cand = d + mesh.lengths()[topo.tri_edges[t][3 - c - cx]];
          if (cand < dist[x]) {
            dist[x] = cand;
            heap.emplace(cand, x);
          }
        }
      }
    }
  }
  return dist;
}

DistancePanel panel_eval(const IntrinsicMesh& mesh, const DistancePanel& panel, int jobs) {
  std::vector<int> sources;
  for (const auto& [a, b] : panel.pairs) sources.push_back(a);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

  std::vector<std::vector<double>> fields(sources.size());
  if (jobs <= 1) {
    for (std::size_t s = 0; s < sources.size(); ++s) fields[s] = fast_march(mesh, sources[s]);
  } else {
    for (std::size_t begin = 0; begin < sources.size(); begin += jobs) {
      std::vector<std::future<std::vector<double>>> running;
      const std::size_t end = std::min(sources.size(), begin + static_cast<std::size_t>(jobs));
      for (std::size_t s = begin; s < end; ++s)
        running.push_back(std::async(std::launch::async, [&mesh, src = sources[s]] { return fast_march(mesh, src); }));
      for (std::size_t s = begin; s < end; ++s) fields[s] = running[s - begin].get();
    }
  }
  DistancePanel out = panel;
  out.method = DistanceMethod::FastMarching;
  out.values.resize(panel.pairs.size());
  for (std::size_t p = 0; p < panel.pairs.size(); ++p) {
    const auto [a, b] = panel.pairs[p];
    const auto s = std::lower_bound(sources.begin(), sources.end(), a) - sources.begin();
    out.values[p] = fields[s][b];
  }
  return out;
}

std::vector<std::pair<int, int>> make_panel_pairs(const SphereMesh& mesh, int count, std::uint64_t seed,
                                                  double min_angle) {
  std::mt19937_64 rng(seed);
  const std::uint64_t n = mesh.directions.size();
  const double cos_max = std::cos(min_angle);
  std::vector<std::pair<int, int>> pairs;
  std::set<std::pair<int, int>> seen;
  for (int attempt = 0; static_cast<int>(pairs.size()) < count && attempt < 1000000; ++attempt) {
    const int a = static_cast<int>(rng() % n);
    const int b = static_cast<int>(rng() % n);
    if (a == b) continue;
    if (mesh.directions[a].dot(mesh.directions[b]) > cos_max) continue;
    if (!seen.insert(std::minmax(a, b)).second) continue;
    pairs.emplace_back(a, b);
  }
  return pairs;
}

int nearest_direction(const SphereMesh& mesh, const Vec3& direction) {
  int best = 0;
  double best_dot = -2.0;
  for (int i = 0; i < static_cast<int>(mesh.directions.size()); ++i) {
    const double d = mesh.directions[i].dot(direction);
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return best;
}

}  // namespace convexflow
