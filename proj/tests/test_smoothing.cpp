#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "convexflow/error.hpp"
#include "convexflow/smoothing.hpp"
#include "fixtures.hpp"

using namespace convexflow;

namespace {

const double kSqrt4Pi = std::sqrt(4.0 * std::numbers::pi);

SupportField ball_field(double r, int lmax = 4) {
  SupportField f;
  f.lmax = lmax;
  f.quadrature_level = default_quadrature_level(lmax);
  f.coefficients.assign((lmax + 1) * (lmax + 1), 0.0);
  f.coefficients[0] = r * kSqrt4Pi;
  f.margin = measure_margin(f);
  return f;
}

}  // namespace

TEST_CASE("quadrature integrates products of harmonics to the identity") {
  const int lmax = 6;
  const ShBasis basis(lmax);
  const SphereQuadrature q = gauss_legendre_sphere(lmax + 1);
  std::vector<double> y(basis.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    basis.evaluate(q.nodes[k], y);
    for (int i = 0; i < basis.size(); ++i)
      for (int j = 0; j < basis.size(); ++j) gram(i, j) += q.weights[k] * y[i] * y[j];
  }
  CHECK((gram - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degree one harmonics are the coordinate functions") {
  const ShBasis basis(1);
  std::vector<double> y(4);
  const Vec3 n = Vec3(0.2, -0.5, 0.7).normalized();
  basis.evaluate(n, y);
  const double c = std::sqrt(3.0 / (4.0 * std::numbers::pi));
  CHECK(std::abs(y[ShBasis::index(1, 0)]) == doctest::Approx(c * std::abs(n.z())));
  CHECK(std::abs(y[ShBasis::index(1, 1)]) == doctest::Approx(c * std::abs(n.x())));
  CHECK(std::abs(y[ShBasis::index(1, -1)]) == doctest::Approx(c * std::abs(n.y())));
  CHECK(basis.sum(y, n) > 0.0);
}

TEST_CASE("harmonics are regular at the poles") {
  const ShBasis basis(12);
  std::vector<double> a(basis.size()), b(basis.size());
  basis.evaluate(Vec3::UnitZ(), a);
  basis.evaluate(Vec3(1e-9, 0, 1).normalized(), b);
  for (int i = 0; i < basis.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-6));
}

TEST_CASE("projected ball has only the constant term") {
  const ConvexBody ball = convex_hull(fixtures::sphere_points(4000, 1.5));
  const SupportField f = project_support(ball, 8);
  CHECK(f.coefficients[0] == doctest::Approx(1.5 * kSqrt4Pi).epsilon(2e-3));
  for (std::size_t i = 1; i < f.coefficients.size(); ++i) CHECK(std::abs(f.coefficients[i]) < 2e-3);
}

TEST_CASE("degree zero projection of the cube is its mean support") {
  const SupportField f = project_support(fixtures::cube(), 0);
  CHECK(f.coefficients.size() == 1);
  CHECK(f.mean_support() == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(f.evaluate(Vec3::UnitX()) == doctest::Approx(0.75).epsilon(1e-3));
}

TEST_CASE("cube projection at degree 24 reconstructs the support function") {
  const ConvexBody cube = fixtures::cube();
  const SupportField f = project_support(cube, 24);
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 d = fixtures::random_unit(rng);
    worst = std::max(worst, std::abs(f.evaluate(d) - cube.support(d)));
  }
  // Sup error is set by the kinks of the cube's support function.
  CHECK(worst < 0.02);
  CHECK(f.reconstruction_error < 0.02);
}

TEST_CASE("coarse quadrature is rejected") {
  CHECK_THROWS_AS(project_support(fixtures::cube(), 10, 10), Error);
  CHECK_NOTHROW(project_support(fixtures::cube(), 10, 11));
}

TEST_CASE("heat mollification") {
  const SupportField cube = project_support(fixtures::cube(), 24);
  SUBCASE("zero epsilon is the identity") {
    const SupportField same = heat_mollify(cube, 0.0);
    CHECK(same.coefficients == cube.coefficients);
  }
  SUBCASE("balls are fixed") {
    const SupportField b = ball_field(2.0);
    CHECK(heat_mollify(b, 0.3).coefficients == b.coefficients);
  }
  SUBCASE("coefficients are damped by exp(-l(l+1) eps)") {
    const SupportField m = heat_mollify(cube, 0.1);
    for (int l = 0; l <= 24; l += 4)
      for (int mm = -l; mm <= l; ++mm) {
        const int i = ShBasis::index(l, mm);
        CHECK(m.coefficients[i] == doctest::Approx(cube.coefficients[i] * std::exp(-l * (l + 1) * 0.1)));
      }
  }
  SUBCASE("distance to the cube shrinks with epsilon") {
    const ConvexBody body = fixtures::cube();
    const double d2 = hausdorff_distance(margin_repair(heat_mollify(cube, 0.2)), body);
    const double d1 = hausdorff_distance(margin_repair(heat_mollify(cube, 0.1)), body);
    const double d05 = hausdorff_distance(margin_repair(heat_mollify(cube, 0.05)), body);
    CHECK(d05 < d1);
    CHECK(d1 < d2);
  }
  SUBCASE("mollification contracts toward the mean") {
    SupportField mean = cube;
    std::fill(mean.coefficients.begin() + 1, mean.coefficients.end(), 0.0);
    double previous = hausdorff_distance(cube, mean);
    for (double eps : {0.01, 0.02, 0.05, 0.1, 0.2}) {
      const double d = hausdorff_distance(heat_mollify(cube, eps), mean);
      CHECK(d <= previous + 1e-12);
      previous = d;
    }
  }
}

TEST_CASE("margin of a ball is its radius") {
  CHECK(ball_field(1.25).margin == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("margin repair") {
  SUBCASE("convex enough fields are untouched") {
    const SupportField b = ball_field(1.0);
    const SupportField r = margin_repair(b);
    CHECK(r.coefficients == b.coefficients);
    CHECK(r.shift == 0.0);
  }
  SUBCASE("truncation ringing is absorbed by a ball") {
    const SupportField raw = project_support(fixtures::cube(), 24);
    REQUIRE(raw.margin < 0.0);
    const double mu = default_mu_min(raw);
    const SupportField r = margin_repair(raw);
    CHECK(r.margin >= mu);
    CHECK(r.shift <= -raw.margin + mu + 1e-9);
    CHECK(r.coefficients[0] - raw.coefficients[0] <= (-raw.margin + mu) * kSqrt4Pi + 1e-9);
    CHECK(hausdorff_distance(r, raw) == doctest::Approx(r.shift).epsilon(1e-9));
  }
}

TEST_CASE("Hausdorff distance between balls") {
  CHECK(hausdorff_distance(ball_field(1.0), ball_field(1.75)) == doctest::Approx(0.75));
}

TEST_CASE("Hausdorff grid resolution is converged") {
  const ConvexBody body = fixtures::cube();
  const SupportField m = margin_repair(heat_mollify(project_support(body, 24), 0.1));
  const double coarse = hausdorff_distance(m, body, 4);
  const double fine = hausdorff_distance(m, body, 5);
  CHECK(coarse == doctest::Approx(fine).epsilon(0.01));
}

TEST_CASE("frame rotates the quadrature grid with the body") {
  const Mat3 r = Eigen::AngleAxisd(1.1, Vec3(0.3, -1, 0.5).normalized()).toRotationMatrix();
  const ConvexBody a = fixtures::cube();
  const ConvexBody b = transformed(a, r, Vec3::Zero());
  const SupportField fa = project_support(a, 12);
  const SupportField fb = project_support(b, 12, 0, r);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const Vec3 d = fixtures::random_unit(rng);
    CHECK(std::abs(fb.evaluate(r * d) - fa.evaluate(d)) < 1e-13);
  }
}

TEST_CASE("mollified fields approach the projection as epsilon halves") {
  const SupportField raw = project_support(fixtures::cube(), 24);
  double previous = 1e300;
  for (double eps : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    const double d = hausdorff_distance(heat_mollify(raw, eps), raw);
    CHECK(d <= previous * 1.05);
    previous = d;
  }
  CHECK(previous < 0.1);
}
