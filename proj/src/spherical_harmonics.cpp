#include "convexflow/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>

namespace convexflow {

ShBasis::ShBasis(int lmax) : lmax_(lmax) {
  a_.assign(size(), 0.0);
  b_.assign(size(), 0.0);
  diag_.assign(lmax + 1, 0.0);
  for (int m = 1; m <= lmax; ++m) diag_[m] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int l = 0; l <= lmax; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double l2 = static_cast<double>(l) * l;
      const double m2 = static_cast<double>(m) * m;
      if (l >= m + 2) {
        a_[index(l, m)] = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
        const double lm1 = l - 1.0;
        b_[index(l, m)] = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
      }
    }
  }
}

void ShBasis::evaluate(const Vec3& u, std::span<double> out) const {
  const double z = u.z();
  double qmm = 0.5 / std::sqrt(std::numbers::pi);
  double re = 1.0, im = 0.0;  // (x + iy)^m
  for (int m = 0; m <= lmax_; ++m) {
    if (m > 0) {
      qmm *= diag_[m];
      const double nre = re * u.x() - im * u.y();
      im = re * u.y() + im * u.x();
      re = nre;
    }
    const double cre = (m == 0) ? 1.0 : std::numbers::sqrt2 * re;
    const double cim = std::numbers::sqrt2 * im;
    double q2 = 0.0, q1 = qmm;
    for (int l = m; l <= lmax_; ++l) {
      double q;
      if (l == m) {
        q = qmm;
      } else if (l == m + 1) {
        q = std::sqrt(2.0 * m + 3.0) * z * qmm;
      } else {
        q = a_[index(l, m)] * (z * q1 - b_[index(l, m)] * q2);
      }
      if (l > m) {
        q2 = q1;
        q1 = q;
      }
      out[index(l, m)] = q * cre;
      if (m > 0) out[index(l, -m)] = q * cim;
    }
  }
}

double ShBasis::sum(std::span<const double> c, const Vec3& u) const {
  const double z = u.z();
  double qmm = 0.5 / std::sqrt(std::numbers::pi);
  double re = 1.0, im = 0.0;
  double acc = 0.0;
  for (int m = 0; m <= lmax_; ++m) {
    if (m > 0) {
      qmm *= diag_[m];
      const double nre = re * u.x() - im * u.y();
      im = re * u.y() + im * u.x();
      re = nre;
    }
    // Accumulate the two Legendre-weighted coefficient sums for this order.
    double sre = c[index(m, m)] * qmm;
    double sim = (m > 0) ? c[index(m, -m)] * qmm : 0.0;
    double q2 = qmm, q1 = 0.0;
    if (m + 1 <= lmax_) {
      q1 = std::sqrt(2.0 * m + 3.0) * z * qmm;
      sre += c[index(m + 1, m)] * q1;
      if (m > 0) sim += c[index(m + 1, -m)] * q1;
    }
    for (int l = m + 2; l <= lmax_; ++l) {
      const int k = index(l, m);
      const double q = a_[k] * (z * q1 - b_[k] * q2);
      q2 = q1;
      q1 = q;
      sre += c[k] * q;
      if (m > 0) sim += c[index(l, -m)] * q;
    }
    if (m == 0) {
      acc += sre;
    } else {
      acc += std::numbers::sqrt2 * (sre * re + sim * im);
    }
  }
  return acc;
}

SphereQuadrature gauss_legendre_sphere(int level) {
  SphereQuadrature q;
  q.level = level;
  const int nt = level;
  const int np = 2 * level;
  std::vector<double> x(nt), w(nt);
  for (int i = 0; i < nt; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (nt + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= nt; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (nt == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = nt * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  q.nodes.reserve(static_cast<std::size_t>(nt) * np);
  q.weights.reserve(q.nodes.capacity());
  for (int i = 0; i < nt; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
    for (int j = 0; j < np; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / np;
      q.nodes.emplace_back(s * std::cos(phi), s * std::sin(phi), x[i]);
      q.weights.push_back(w[i] * 2.0 * std::numbers::pi / np);
    }
  }
  return q;
}

void tangent_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  const Vec3 helper = std::abs(n.x()) < 0.6 ? Vec3::UnitX() : (std::abs(n.y()) < 0.6 ? Vec3::UnitY() : Vec3::UnitZ());
  e1 = (helper - helper.dot(n) * n).normalized();
  e2 = n.cross(e1);
}

Vec3 sphere_exp(const Vec3& n, const Vec3& e1, const Vec3& e2, double a, double b) {
  const double r = std::hypot(a, b);
  if (r == 0.0) return n;
  return std::cos(r) * n + (std::sin(r) / r) * (a * e1 + b * e2);
}

}  // namespace convexflow
