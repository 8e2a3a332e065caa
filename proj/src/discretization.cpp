#include "convexflow/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "convexflow/error.hpp"

namespace convexflow {

std::vector<double> RadialField::reciprocal() const {
  std::vector<double> v(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) v[i] = 1.0 / rho[i];
  return v;
}

RadialField sample_radial(const ConvexBody& body, const SphereMesh& mesh) {
  RadialField out;
  out.center = body.center();
  out.rho.reserve(mesh.directions.size());
  for (const auto& d : mesh.directions) out.rho.push_back(body.radial(d));
  return out;
}

namespace {

// Newton minimization of h(n) / <d, n> on the sphere; the sublevel sets are
// spherically convex, so the local minimizer is the global one.
double gauge_minimum(const SupportField& field, const Vec3& d, Vec3 n) {
  constexpr double s = 1e-4;
  auto f = [&](const Vec3& m) {
    const double dn = d.dot(m);
    if (dn <= 1e-3) return std::numeric_limits<double>::infinity();
    return field.evaluate(m) / dn;
  };
  double fc = f(n);
  for (int iter = 0; iter < 50; ++iter) {
    Vec3 e1, e2;
    tangent_frame(n, e1, e2);
    auto at = [&](double a, double b) { return f(sphere_exp(n, e1, e2, a, b)); };
    const double fp0 = at(s, 0), fm0 = at(-s, 0), f0p = at(0, s), f0m = at(0, -s);
    const double fpp = at(s, s), fpm = at(s, -s), fmp = at(-s, s), fmm = at(-s, -s);
    Eigen::Vector2d g((fp0 - fm0) / (2 * s), (f0p - f0m) / (2 * s));
    Eigen::Matrix2d h;
    h(0, 0) = (fp0 - 2 * fc + fm0) / (s * s);
    h(1, 1) = (f0p - 2 * fc + f0m) / (s * s);
    h(0, 1) = h(1, 0) = (fpp - fpm - fmp + fmm) / (4 * s * s);
    Eigen::Vector2d p;
    if (!std::isfinite(g.squaredNorm())) break;
    if (h(0, 0) > 0 && h.determinant() > 0) {
      p = -h.ldlt().solve(g);
    } else {
      p = -g / std::max(1.0, g.norm() * 10.0);
    }
    const double maxstep = 0.2;
    if (p.norm() > maxstep) p *= maxstep / p.norm();
    double fn = std::numeric_limits<double>::infinity();
    Vec3 cand = n;
    for (int bt = 0; bt < 40; ++bt) {
      cand = sphere_exp(n, e1, e2, p.x(), p.y());
      fn = f(cand);
      if (fn <= fc) break;
      p *= 0.5;
    }
    if (!(fn <= fc)) break;
    n = cand;
    const double improvement = fc - fn;
    fc = fn;
    if (p.norm() < 1e-10 || improvement <= 1e-16 * std::abs(fc)) break;
  }
  return fc;
}

}  // namespace

RadialField sample_radial(const SupportField& field, const SphereMesh& mesh) {
  const SphereQuadrature quad = gauss_legendre_sphere(field.quadrature_level);
  std::vector<Vec3> normals;
  std::vector<double> support;
  normals.reserve(quad.nodes.size());
  for (const auto& q : quad.nodes) {
    normals.push_back(field.frame * q);
    support.push_back(field.evaluate(normals.back()));
  }
  RadialField out;
  out.center = field.center;
  out.rho.resize(mesh.directions.size());
  for (std::size_t i = 0; i < mesh.directions.size(); ++i) {
    const Vec3& d = mesh.directions[i];
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < normals.size(); ++k) {
      const double dn = d.dot(normals[k]);
      if (dn <= 0.1) continue;
      const double r = support[k] / dn;
      if (r < best) {
        best = r;
        arg = k;
      }
    }
    // The mesh direction itself is often the better start for round bodies.
    const double at_d = field.evaluate(d);
    Vec3 start = at_d <= best ? d : normals[arg];
    out.rho[i] = std::min(gauge_minimum(field, d, start), std::min(best, at_d));
  }
  return out;
}

RadialField constant_radial(const SphereMesh& mesh, double radius) {
  RadialField out;
  out.rho.assign(mesh.directions.size(), radius);
  return out;
}

RadialField ellipsoid_radial(const SphereMesh& mesh, const Vec3& semiaxes) {
  RadialField out;
  out.rho.reserve(mesh.directions.size());
  for (const auto& d : mesh.directions) out.rho.push_back(1.0 / d.cwiseQuotient(semiaxes).norm());
  return out;
}

std::vector<Vec3> embedded_positions(const RadialField& field, const SphereMesh& mesh) {
  std::vector<Vec3> pos;
  pos.reserve(mesh.directions.size());
  for (std::size_t i = 0; i < mesh.directions.size(); ++i)
    pos.push_back(field.center + field.rho[i] * mesh.directions[i]);
  return pos;
}

IntrinsicMesh embed(const RadialField& field, const SphereMesh& mesh) {
  auto topo = std::make_shared<const Topology>(mesh.topology);
  IntrinsicMesh out = IntrinsicMesh::from_positions(topo, embedded_positions(field, mesh));
  if (!(out.min_margin() >= 1e-12))
    throw Error(Errc::DegenerateTriangle, "triangle margin " + std::to_string(out.min_margin()));
  return out;
}

std::vector<double> round_edge_lengths(const SphereMesh& mesh) {
  std::vector<double> out;
  out.reserve(mesh.topology.edges.size());
  for (const auto& e : mesh.topology.edges)
    out.push_back((mesh.directions[e.v0] - mesh.directions[e.v1]).norm());
  return out;
}

namespace {

std::vector<int> ring_neighbourhood(const Topology& topo, int vertex, int rings) {
  std::vector<int> out{vertex};
  std::vector<int> frontier{vertex};
  for (int r = 0; r < rings; ++r) {
    std::vector<int> next;
    for (int v : frontier)
      for (int k = topo.vv_offsets[v]; k < topo.vv_offsets[v + 1]; ++k) {
        const int w = topo.vv_list[k];
        if (std::find(out.begin(), out.end(), w) == out.end()) {
          out.push_back(w);
          next.push_back(w);
        }
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

LocalJet local_jet(const SphereMesh& mesh, const std::vector<double>& values, int vertex, int rings) {
  const Vec3& n = mesh.directions[vertex];
  Vec3 e1, e2;
  tangent_frame(n, e1, e2);
  const std::vector<int> nb = ring_neighbourhood(mesh.topology, vertex, rings);
  const int m = static_cast<int>(nb.size());

  std::vector<Eigen::Vector2d> xy(m);
  double radius = 0.0;
  for (int j = 0; j < m; ++j) {
    const Vec3& d = mesh.directions[nb[j]];
    const Vec3 t = d - n.dot(d) * n;
    const double tn = t.norm();
    const double angle = std::atan2(tn, n.dot(d));
    xy[j] = tn > 0 ? Eigen::Vector2d(angle * t.dot(e1) / tn, angle * t.dot(e2) / tn) : Eigen::Vector2d::Zero();
    radius = std::max(radius, angle);
  }
  Eigen::MatrixXd a(m, 6);
  Eigen::VectorXd b(m);
  for (int j = 0; j < m; ++j) {
    const double x = xy[j].x() / radius, y = xy[j].y() / radius;
    a.row(j) << 1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y;
    b(j) = values[nb[j]];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LocalJet jet;
  jet.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(jet.condition <= 1e8))
    throw Error(Errc::IllConditionedStencil, "vertex " + std::to_string(vertex));
  const Eigen::VectorXd c = svd.solve(b);
  jet.value = c(0);
  jet.gradient = Eigen::Vector2d(c(1), c(2)) / radius;
  jet.hessian << c(3), c(4), c(4), c(5);
  jet.hessian /= radius * radius;
  return jet;
}

SmoothMetric smooth_metric_at(const RadialField& field, const SphereMesh& mesh, int vertex, int rings) {
  const LocalJet jet = local_jet(mesh, field.rho, vertex, rings);
  const double rho = field.rho[vertex];
  const Eigen::Vector2d& g = jet.gradient;
  SmoothMetric out;
  out.metric = rho * rho * Eigen::Matrix2d::Identity() + g * g.transpose();
  out.second_form = (rho * rho * Eigen::Matrix2d::Identity() + 2.0 * g * g.transpose() - rho * jet.hessian) /
                    std::sqrt(rho * rho + g.squaredNorm());
  out.gauss_curvature = out.second_form.determinant() / out.metric.determinant();
  return out;
}

ReciprocalGradientBound reciprocal_gradient_bound(const RadialField& field, const SphereMesh& mesh, int rings) {
  const std::vector<double> v = field.reciprocal();
  ReciprocalGradientBound out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    const LocalJet jet = local_jet(mesh, v, i, rings);
    out.max_combined = std::max(out.max_combined, jet.gradient.squaredNorm() + v[i] * v[i]);
    out.max_vsq = std::max(out.max_vsq, v[i] * v[i]);
  }
  return out;
}

}  // namespace convexflow
