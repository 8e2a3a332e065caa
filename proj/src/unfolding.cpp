#include "convexflow/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "convexflow/error.hpp"

namespace convexflow {

namespace {

using V2 = Eigen::Vector2d;

double cross2(const V2& a, const V2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Shared {
  int face;
  int other;
  int corner;  // edge runs corners[corner] -> corners[corner + 1] of `face`
};

// Rigid map of one face into the unfolding plane.
struct Placement {
  Vec3 origin, axis_u, axis_v;
  V2 origin2, axis_u2, axis_v2;

  V2 operator()(const Vec3& x) const {
    const Vec3 d = x - origin;
    return origin2 + d.dot(axis_u) * axis_u2 + d.dot(axis_v) * axis_v2;
  }
};

struct Solver {
  std::vector<PolyFace> faces;
  std::vector<std::vector<int>> neighbour;  // per face, per polygon edge: adjacent face
  double scale = 1.0;

  explicit Solver(const ConvexBody& body) : faces(merge_coplanar(body)) {
    scale = body.circumradius();
    neighbour.resize(faces.size());
    std::map<std::pair<long, long>, std::vector<std::pair<int, int>>> by_edge;
    // Corners are shared verbatim between faces (they are hull vertices), so
    // exact coordinates identify edges.
    std::map<std::array<double, 3>, long> ids;
    auto id = [&](const Vec3& p) {
      const std::array<double, 3> k{p.x(), p.y(), p.z()};
      auto [it, inserted] = ids.emplace(k, static_cast<long>(ids.size()));
      return it->second;
    };
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      const int n = static_cast<int>(faces[f].corners.size());
      neighbour[f].assign(n, -1);
      for (int c = 0; c < n; ++c) {
        const long a = id(faces[f].corners[c]), b = id(faces[f].corners[(c + 1) % n]);
        by_edge[std::minmax(a, b)].emplace_back(f, c);
      }
    }
    for (const auto& [key, uses] : by_edge)
      if (uses.size() == 2) {
        neighbour[uses[0].first][uses[0].second] = uses[1].first;
        neighbour[uses[1].first][uses[1].second] = uses[0].first;
      }
  }

  bool contains(int f, const Vec3& p) const {
    const PolyFace& face = faces[f];
    const double tol = 1e-9 * scale;
    if (std::abs(face.normal.dot(p) - face.offset) > tol) return false;
    const int n = static_cast<int>(face.corners.size());
    for (int c = 0; c < n; ++c) {
      const Vec3& a = face.corners[c];
      const Vec3& b = face.corners[(c + 1) % n];
      if ((b - a).cross(p - a).dot(face.normal) < -tol * (b - a).norm()) return false;
    }
    return true;
  }

  double best = std::numeric_limits<double>::infinity();
  V2 a2;
  Vec3 target;
  std::vector<int> end_faces;
  std::vector<char> used;
  std::vector<std::pair<V2, V2>> crossed;
  int max_faces = 6;

  bool segment_valid(const V2& b2) const {
    const V2 d = b2 - a2;
    double last = -1e-12;
    for (const auto& [p, q] : crossed) {
      const V2 e = q - p;
      const double den = cross2(d, e);
      if (std::abs(den) < 1e-300) return false;
      const double s = cross2(p - a2, e) / den;  // along a->b
      const double r = cross2(p - a2, d) / den;  // along p->q
      const double tol = 1e-9;
      if (s < last - tol || s > 1.0 + tol || r < -tol || r > 1.0 + tol) return false;
      last = s;
    }
    return true;
  }

  void search(int f, const Placement& place, int depth) {
    if (std::find(end_faces.begin(), end_faces.end(), f) != end_faces.end()) {
      const V2 b2 = place(target);
      const double d = (b2 - a2).norm();
      if (d < best && segment_valid(b2)) best = d;
    }
    if (depth >= max_faces) return;
    const PolyFace& face = faces[f];
    const int n = static_cast<int>(face.corners.size());
    V2 centroid2 = V2::Zero();
    for (const auto& c : face.corners) centroid2 += place(c);
    centroid2 /= n;
    for (int c = 0; c < n; ++c) {
      const int g = neighbour[f][c];
      if (g < 0 || used[g]) continue;
      const Vec3& p = face.corners[c];
      const Vec3& q = face.corners[(c + 1) % n];
      const V2 p2 = place(p), q2 = place(q);
      // Any path through this edge is at least as long as the distance to it.
      const V2 e = q2 - p2;
      const double s = std::clamp((a2 - p2).dot(e) / e.squaredNorm(), 0.0, 1.0);
      if ((p2 + s * e - a2).norm() > best) continue;

      Placement next;
      next.origin = p;
      next.axis_u = (q - p).normalized();
      const PolyFace& gf = faces[g];
      Vec3 gc = Vec3::Zero();
      for (const auto& x : gf.corners) gc += x;
      gc /= static_cast<double>(gf.corners.size());
      Vec3 v = gf.normal.cross(next.axis_u);
      if (v.dot(gc - p) < 0) v = -v;
      next.axis_v = v;
      next.origin2 = p2;
      next.axis_u2 = (q2 - p2).normalized();
      V2 perp(-next.axis_u2.y(), next.axis_u2.x());
      if (perp.dot(centroid2 - p2) > 0) perp = -perp;
      next.axis_v2 = perp;

      used[g] = 1;
      crossed.emplace_back(p2, q2);
      search(g, next, depth + 1);
      crossed.pop_back();
      used[g] = 0;
    }
  }

  double solve(const Vec3& a, const Vec3& b, int budget) {
    std::vector<int> start_faces;
    end_faces.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (contains(f, a)) start_faces.push_back(f);
      if (contains(f, b)) end_faces.push_back(f);
    }
    if (start_faces.empty() || end_faces.empty())
      throw Error(Errc::BudgetExceeded, "point is not on the polyhedron surface");
    for (int f : start_faces)
      if (std::find(end_faces.begin(), end_faces.end(), f) != end_faces.end()) return (a - b).norm();

    best = std::numeric_limits<double>::infinity();
    target = b;
    max_faces = budget;
    used.assign(faces.size(), 0);
    for (int f : start_faces) {
      Placement place;
      place.origin = a;
      place.axis_u = (faces[f].corners[0] - a).norm() > 1e-12 * scale ? (faces[f].corners[0] - a).normalized()
                                                                        : (faces[f].corners[1] - a).normalized();
      place.axis_v = faces[f].normal.cross(place.axis_u);
      place.origin2 = V2::Zero();
      place.axis_u2 = V2(1, 0);
      place.axis_v2 = V2(0, 1);
      a2 = V2::Zero();
      used[f] = 1;
      search(f, place, 1);
      used[f] = 0;
    }
    if (!std::isfinite(best))
      throw Error(Errc::BudgetExceeded, "no face sequence within " + std::to_string(budget) + " faces");
    return best;
  }
};

}  // namespace

std::vector<PolyFace> merge_coplanar(const ConvexBody& body) {
  const double tol = 1e-9;
  const double scale = body.circumradius();
  std::vector<PolyFace> out;
  std::vector<std::vector<int>> members;
  for (std::size_t f = 0; f < body.facets().size(); ++f) {
    const Vec3& n = body.normals()[f];
    const double off = body.offsets()[f];
    int found = -1;
    for (std::size_t g = 0; g < out.size() && found < 0; ++g)
      if (out[g].normal.dot(n) > 1.0 - tol && std::abs(out[g].offset - off) <= tol * scale) found = static_cast<int>(g);
    if (found < 0) {
      out.push_back({n, off, {}});
      members.emplace_back();
      found = static_cast<int>(out.size()) - 1;
    }
    members[found].push_back(static_cast<int>(f));
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    std::vector<int> verts;
    for (int f : members[g])
      for (int v : body.facets()[f]) verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    Vec3 c = Vec3::Zero();
    for (int v : verts) c += body.vertices()[v];
    c /= static_cast<double>(verts.size());
    Vec3 e1, e2;
    const Vec3& n = out[g].normal;
    e1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
    e2 = n.cross(e1);
    std::sort(verts.begin(), verts.end(), [&](int a, int b) {
      const Vec3 da = body.vertices()[a] - c, db = body.vertices()[b] - c;
      return std::atan2(da.dot(e2), da.dot(e1)) < std::atan2(db.dot(e2), db.dot(e1));
    });
    for (int v : verts) out[g].corners.push_back(body.vertices()[v]);
  }
  return out;
}

double unfold_polyhedron(const ConvexBody& body, const Vec3& a, const Vec3& b, int max_faces) {
  Solver solver(body);
  return solver.solve(a, b, max_faces);
}

std::vector<double> unfold_polyhedron(const ConvexBody& body, const std::vector<std::pair<Vec3, Vec3>>& pairs,
                                      int max_faces) {
  Solver solver(body);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.push_back(solver.solve(a, b, max_faces));
  return out;
}

}  // namespace convexflow
