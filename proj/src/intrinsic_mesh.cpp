#include "convexflow/intrinsic_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "convexflow/error.hpp"

namespace convexflow {

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

IntrinsicMesh::IntrinsicMesh(std::shared_ptr<const Topology> topology, std::vector<double> base_lengths)
    : topology_(std::move(topology)), base_lengths_(std::move(base_lengths)) {
  u_.assign(topology_->num_vertices, 0.0);
  recompute();
}

IntrinsicMesh IntrinsicMesh::from_positions(std::shared_ptr<const Topology> topology,
                                            const std::vector<Vec3>& positions) {
  std::vector<double> lengths;
  lengths.reserve(topology->edges.size());
  for (const auto& e : topology->edges) lengths.push_back((positions[e.v0] - positions[e.v1]).norm());
  return IntrinsicMesh(std::move(topology), std::move(lengths));
}

void IntrinsicMesh::set_conformal(std::vector<double> u) {
  u_ = std::move(u);
  recompute();
}

void IntrinsicMesh::assign_conformal(std::span<const double> u) {
  u_.assign(u.begin(), u.end());
  recompute();
}

double IntrinsicMesh::edge_length(int a, int b) const {
  const Topology& topo = *topology_;
  for (int k = topo.vt_offsets[a]; k < topo.vt_offsets[a + 1]; ++k) {
    const int t = topo.vt_list[k];
    for (int c = 0; c < 3; ++c) {
      const Edge& e = topo.edges[topo.tri_edges[t][c]];
      if ((e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a)) return lengths_[topo.tri_edges[t][c]];
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void IntrinsicMesh::recompute() {
  const Topology& topo = *topology_;
  const int nv = topo.num_vertices;
  const int ne = static_cast<int>(topo.edges.size());
  const int nt = static_cast<int>(topo.triangles.size());

  std::vector<double> scale(nv);
  for (int v = 0; v < nv; ++v) scale[v] = std::exp(0.5 * u_[v]);
  lengths_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = topo.edges[e];
    lengths_[e] = scale[ed.v0] * scale[ed.v1] * base_lengths_[e];
  }

  angles_.resize(nt);
  tri_area_.resize(nt);
  vertex_area_.assign(nv, 0.0);
  defect_.assign(nv, 2.0 * std::numbers::pi);
  min_margin_ = std::numeric_limits<double>::infinity();
  for (int t = 0; t < nt; ++t) {
    const auto& te = topo.tri_edges[t];
    const double l[3] = {lengths_[te[0]], lengths_[te[1]], lengths_[te[2]]};
    const double perim = l[0] + l[1] + l[2];
    for (int k = 0; k < 3; ++k) {
      const double a = l[k], b = l[(k + 1) % 3], c = l[(k + 2) % 3];
      min_margin_ = std::min(min_margin_, (b + c - a) / perim);
      const double cosv = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
      angles_[t][k] = std::acos(cosv);
    }
    // Kahan's stable Heron formula.
    double s[3] = {l[0], l[1], l[2]};
    std::sort(s, s + 3, std::greater<>());
    const double a = s[0], b = s[1], c = s[2];
    const double prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    tri_area_[t] = 0.25 * std::sqrt(std::max(0.0, prod));
    const Tri& tri = topo.triangles[t];
    for (int k = 0; k < 3; ++k) {
      vertex_area_[tri[k]] += tri_area_[t] / 3.0;
      defect_[tri[k]] -= angles_[t][k];
    }
  }
  curvature_.resize(nv);
  for (int v = 0; v < nv; ++v) curvature_[v] = defect_[v] / vertex_area_[v];
  total_area_ = compensated_sum(tri_area_);
  defect_sum_ = compensated_sum(defect_);
}

}  // namespace convexflow
