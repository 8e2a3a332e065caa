#include "convexflow/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "convexflow/error.hpp"
#include "convexflow/sphere_mesh.hpp"

namespace convexflow {

namespace {

std::shared_ptr<const ShBasis> cached_basis(int lmax) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const ShBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[lmax];
  if (!slot) slot = std::make_shared<const ShBasis>(lmax);
  return slot;
}

constexpr double kHessStep = 1e-4;

double min_tangent_eigen(const SupportField& f, const Vec3& n) {
  Vec3 e1, e2;
  tangent_frame(n, e1, e2);
  const double s = kHessStep;
  auto h = [&](double a, double b) { return f.evaluate(sphere_exp(n, e1, e2, a, b)); };
  const double h0 = h(0, 0);
  const double h11 = (h(s, 0) - 2.0 * h0 + h(-s, 0)) / (s * s);
  const double h22 = (h(0, s) - 2.0 * h0 + h(0, -s)) / (s * s);
  const double h12 = (h(s, s) - h(s, -s) - h(-s, s) + h(-s, -s)) / (4.0 * s * s);
  const double a = h11 + h0, d = h22 + h0;
  return 0.5 * (a + d) - std::hypot(0.5 * (a - d), h12);
}

}  // namespace

const ShBasis& SupportField::basis() const {
  if (!basis_ || basis_->lmax() != lmax) basis_ = cached_basis(lmax);
  return *basis_;
}

double SupportField::evaluate(const Vec3& world_direction) const {
  return basis().sum(coefficients, frame.transpose() * world_direction);
}

double SupportField::mean_support() const {
  return coefficients.empty() ? 0.0 : coefficients[0] * 0.5 / std::sqrt(std::numbers::pi);
}

int default_quadrature_level(int lmax) { return 2 * lmax + 16; }

double measure_margin(const SupportField& field) {
  const SphereQuadrature quad = gauss_legendre_sphere(field.quadrature_level);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& q : quad.nodes) margin = std::min(margin, min_tangent_eigen(field, field.frame * q));
  return margin;
}

SupportField project_support(const ConvexBody& body, int lmax, int quadrature_level, const Mat3& frame) {
  if (lmax < 0) throw Error(Errc::QuadratureTooCoarse, "lmax must be non-negative");
  if (quadrature_level == 0) quadrature_level = default_quadrature_level(lmax);
  if (quadrature_level < lmax + 1)
    throw Error(Errc::QuadratureTooCoarse, "quadrature level " + std::to_string(quadrature_level) +
                                               " cannot resolve degree " + std::to_string(2 * lmax));
  SupportField field;
  field.lmax = lmax;
  field.quadrature_level = quadrature_level;
  field.center = body.center();
  field.frame = frame;
  const ShBasis& basis = field.basis();
  field.coefficients.assign(basis.size(), 0.0);

  const SphereQuadrature quad = gauss_legendre_sphere(quadrature_level);
  std::vector<double> values(quad.nodes.size());
  std::vector<double> y(basis.size());
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    values[k] = body.support(frame * quad.nodes[k]);
    basis.evaluate(quad.nodes[k], y);
    const double wv = quad.weights[k] * values[k];
    for (int i = 0; i < basis.size(); ++i) field.coefficients[i] += wv * y[i];
  }
  for (std::size_t k = 0; k < quad.nodes.size(); ++k)
    field.reconstruction_error = std::max(
        field.reconstruction_error, std::abs(basis.sum(field.coefficients, quad.nodes[k]) - values[k]));
  field.margin = measure_margin(field);
  return field;
}

SupportField heat_mollify(const SupportField& field, double epsilon) {
  SupportField out = field;
  if (epsilon == 0.0) return out;
  for (int l = 0; l <= field.lmax; ++l) {
    const double damp = std::exp(-static_cast<double>(l) * (l + 1) * epsilon);
    for (int m = -l; m <= l; ++m) out.coefficients[ShBasis::index(l, m)] *= damp;
  }
  out.margin = measure_margin(out);
  return out;
}

double default_mu_min(const SupportField& field) { return 1e-3 * field.mean_support(); }

SupportField margin_repair(const SupportField& field, double mu_min) {
  if (mu_min < 0.0) mu_min = default_mu_min(field);
  SupportField out = field;
  const double y00 = 0.5 / std::sqrt(std::numbers::pi);
  // A ball of radius c adds c to every tangential eigenvalue; the loop only
  // absorbs rounding in the finite-difference Hessian.
  for (int attempt = 0; attempt < 8 && out.margin < mu_min; ++attempt) {
    double c = mu_min - out.margin;
    if (attempt > 0) c += 1e-12 * std::max(1.0, std::abs(mu_min));
    out.coefficients[0] += c / y00;
    out.shift += c;
    out.margin = measure_margin(out);
  }
  return out;
}

double hausdorff_distance(const SupportField& a, const SupportField& b, int grid_level) {
  const SphereMesh grid = icosphere(grid_level);
  double d = 0.0;
  for (const auto& n : grid.directions) {
    const double ha = a.evaluate(n) + a.center.dot(n);
    const double hb = b.evaluate(n) + b.center.dot(n);
    d = std::max(d, std::abs(ha - hb));
  }
  return d;
}

double hausdorff_distance(const SupportField& a, const ConvexBody& b, int grid_level) {
  const SphereMesh grid = icosphere(grid_level);
  double d = 0.0;
  for (const auto& n : grid.directions) {
    const double ha = a.evaluate(n) + a.center.dot(n);
    const double hb = b.support(n) + b.center().dot(n);
    d = std::max(d, std::abs(ha - hb));
  }
  return d;
}

}  // namespace convexflow
