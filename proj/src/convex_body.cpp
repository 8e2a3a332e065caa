#include "convexflow/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <Eigen/Geometry>

#include "convexflow/error.hpp"

namespace convexflow {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NoIntersection: return "NoIntersection";
    case Errc::Degenerate: return "Degenerate";
    case Errc::QuadratureTooCoarse: return "QuadratureTooCoarse";
    case Errc::LevelTooLarge: return "LevelTooLarge";
    case Errc::DegenerateTriangle: return "DegenerateTriangle";
    case Errc::IllConditionedStencil: return "IllConditionedStencil";
    case Errc::StepRejected: return "StepRejected";
    case Errc::ExtinctionReached: return "ExtinctionReached";
    case Errc::StallDetected: return "StallDetected";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::MissingPanel: return "MissingPanel";
    case Errc::ScheduleMismatch: return "ScheduleMismatch";
    case Errc::CorrespondenceAmbiguous: return "CorrespondenceAmbiguous";
    case Errc::ArtifactMismatch: return "ArtifactMismatch";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

struct HullFace {
  int a, b, c;
  Vec3 n;
  double off;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

HullFace make_face(const std::vector<Vec3>& p, int a, int b, int c) {
  HullFace f{a, b, c, Vec3::Zero(), 0.0};
  f.n = (p[b] - p[a]).cross(p[c] - p[a]).normalized();
  f.off = f.n.dot(p[a]);
  return f;
}

// Largest inscribed ball center by zooming grid search; the clearance is a
// concave piecewise-linear function so the search only needs to localize the
// maximizer.
Vec3 chebyshev_center(const ConvexBody& body, double* radius) {
  Vec3 lo = body.vertices().front();
  Vec3 hi = lo;
  for (const auto& v : body.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  Vec3 best = 0.5 * (lo + hi);
  double best_r = body.facet_clearance(best);
  Vec3 half = 0.5 * (hi - lo);
  constexpr int kSide = 9;
  for (int iter = 0; iter < 80; ++iter) {
    Vec3 center = best;
    for (int i = 0; i < kSide; ++i)
      for (int j = 0; j < kSide; ++j)
        for (int k = 0; k < kSide; ++k) {
          Vec3 x = center + Vec3((2.0 * i / (kSide - 1) - 1.0) * half.x(),
                                 (2.0 * j / (kSide - 1) - 1.0) * half.y(),
                                 (2.0 * k / (kSide - 1) - 1.0) * half.z());
          double r = body.facet_clearance(x);
          if (r > best_r) {
            best_r = r;
            best = x;
          }
        }
    half *= 0.6;
  }
  *radius = best_r;
  return best;
}

}  // namespace

double ConvexBody::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  return d;
}

double ConvexBody::support(const Vec3& direction) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) best = std::max(best, (v - center_).dot(direction));
  return best;
}

double ConvexBody::radial(const Vec3& direction) const {
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    double nd = normals_[f].dot(direction);
    if (nd <= 1e-14) continue;
    rho = std::min(rho, (offsets_[f] - normals_[f].dot(center_)) / nd);
  }
  if (!std::isfinite(rho) || rho <= 0.0)
    throw Error(Errc::NoIntersection, "ray from center does not exit the hull");
  return rho;
}

double ConvexBody::facet_clearance(const Vec3& x) const {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < facets_.size(); ++f)
    r = std::min(r, offsets_[f] - normals_[f].dot(x));
  return r;
}

ConvexBody convex_hull(std::span<const Vec3> input) {
  if (input.size() < 4)
    throw Error(Errc::DegenerateInput, "need at least 4 points");

  std::vector<Vec3> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, (p - pts[0]).norm());
  if (scale == 0.0) throw Error(Errc::DegenerateInput, "all points coincide");
  const double eps = 1e-10 * scale;

  // Initial simplex: first points (in sorted order) that raise the affine rank.
  const int n = static_cast<int>(pts.size());
  int i1 = -1, i2 = -1, i3 = -1;
  for (int i = 1; i < n && i1 < 0; ++i)
    if ((pts[i] - pts[0]).norm() > 1e-12 * scale) i1 = i;
  if (i1 < 0) throw Error(Errc::DegenerateInput, "points are coincident");
  const Vec3 e1 = pts[i1] - pts[0];
  for (int i = 1; i < n && i2 < 0; ++i)
    if (e1.cross(pts[i] - pts[0]).norm() > 1e-12 * scale * scale) i2 = i;
  if (i2 < 0) throw Error(Errc::DegenerateInput, "points are collinear");
  const Vec3 nrm = e1.cross(pts[i2] - pts[0]);
  for (int i = 1; i < n && i3 < 0; ++i)
    if (std::abs(nrm.dot(pts[i] - pts[0])) > 1e-12 * scale * scale * scale) i3 = i;
  if (i3 < 0) throw Error(Errc::DegenerateInput, "points are coplanar");

  std::vector<HullFace> faces;
  std::unordered_map<std::uint64_t, int> edge_face;
  auto add_face = [&](int a, int b, int c) {
    faces.push_back(make_face(pts, a, b, c));
    const int id = static_cast<int>(faces.size()) - 1;
    edge_face[edge_key(a, b)] = id;
    edge_face[edge_key(b, c)] = id;
    edge_face[edge_key(c, a)] = id;
  };

  {
    int s[4] = {0, i1, i2, i3};
    const Vec3 inner = 0.25 * (pts[0] + pts[i1] + pts[i2] + pts[i3]);
    const int tri[4][3] = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    for (const auto& t : tri) {
      int a = s[t[0]], b = s[t[1]], c = s[t[2]];
      HullFace f = make_face(pts, a, b, c);
      if (f.n.dot(inner) > f.off) std::swap(b, c);
      add_face(a, b, c);
    }
  }

  std::vector<int> visible;
  std::vector<std::pair<int, int>> horizon;
  for (int p = 1; p < n; ++p) {
    if (p == i1 || p == i2 || p == i3) continue;
    visible.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      if (faces[f].alive && faces[f].n.dot(pts[p]) - faces[f].off > eps) visible.push_back(f);
    if (visible.empty()) continue;
    for (int f : visible) faces[f].alive = false;
    horizon.clear();
    for (int f : visible) {
      const int v[3] = {faces[f].a, faces[f].b, faces[f].c};
      for (int k = 0; k < 3; ++k) {
        int a = v[k], b = v[(k + 1) % 3];
        auto twin = edge_face.find(edge_key(b, a));
        if (twin != edge_face.end() && faces[twin->second].alive) horizon.emplace_back(a, b);
      }
    }
    for (int f : visible) {
      edge_face.erase(edge_key(faces[f].a, faces[f].b));
      edge_face.erase(edge_key(faces[f].b, faces[f].c));
      edge_face.erase(edge_key(faces[f].c, faces[f].a));
    }
    for (const auto& [a, b] : horizon) add_face(a, b, p);
  }

  ConvexBody body;
  std::vector<int> remap(n, -1);
  for (const auto& f : faces)
    if (f.alive) remap[f.a] = remap[f.b] = remap[f.c] = 0;
  for (int i = 0; i < n; ++i)
    if (remap[i] == 0) {
      remap[i] = static_cast<int>(body.vertices_.size());
      body.vertices_.push_back(pts[i]);
    }
  for (const auto& f : faces) {
    if (!f.alive) continue;
    body.facets_.push_back({remap[f.a], remap[f.b], remap[f.c]});
    body.normals_.push_back(f.n);
    body.offsets_.push_back(f.off);
  }

  Vec3 centroid = Vec3::Zero();
  for (const auto& v : body.vertices_) centroid += v;
  centroid /= static_cast<double>(body.vertices_.size());
  double clearance = body.facet_clearance(centroid);
  double cheb_r = 0.0;
  Vec3 cheb = chebyshev_center(body, &cheb_r);
  if (clearance > 1e-9 * scale) {
    body.center_ = centroid;
  } else {
    body.center_ = cheb;
  }
  body.inradius_ = std::max(cheb_r, clearance);
  for (const auto& v : body.vertices_)
    body.circumradius_ = std::max(body.circumradius_, (v - body.center_).norm());
  return body;
}

double nondegeneracy(const ConvexBody& body, double r_min_relative) {
  const double r = body.inradius();
  if (r < r_min_relative * body.circumradius())
    throw Error(Errc::Degenerate, "inradius " + std::to_string(r) + " below threshold");
  return r;
}

ConvexBody transformed(const ConvexBody& body, const Mat3& rotation, const Vec3& translation) {
  std::vector<Vec3> pts;
  pts.reserve(body.vertices().size());
  for (const auto& v : body.vertices()) pts.push_back(rotation * v + translation);
  return convex_hull(pts);
}

}  // namespace convexflow
