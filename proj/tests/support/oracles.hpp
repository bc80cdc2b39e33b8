#pragma once

// Reference computations used only by the tests. None of them call into the
// library's quadrature tables, closed-form potentials or singularity
// extraction, so agreement is a genuine cross-check.

#include "csie/common.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using csie::cplx;
using csie::CVec3;
using csie::Vec3;

/// Adaptive 1-D Gauss-Kronrod integral on [a, b].
inline double integrate1d(const std::function<double(double)> &f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol);
}

/// Integral over the triangle (apex, p, q) of f, using the collapsed map
/// x = apex + s (p + t (q - p) - apex). The Jacobian carries a factor s, which
/// removes a 1/R singularity sitting at the apex.
inline double integrate_fan(const std::function<double(const Vec3 &)> &f, const Vec3 &apex, const Vec3 &p,
                            const Vec3 &q, double tol = 1e-12) {
  const double jac = (p - apex).cross(q - apex).norm();
  if (jac == 0.0)
    return 0.0;
  auto outer = [&](double t) {
    Vec3 edge = p + t * (q - p);
    auto inner = [&](double s) { return s == 0.0 ? 0.0 : f(apex + s * (edge - apex)) * s; };
    return integrate1d(inner, 0.0, 1.0, tol);
  };
  return jac * integrate1d(outer, 0.0, 1.0, tol);
}

/// Integral of f over triangle (a, b, c) with a possible singularity at the
/// in-plane point `focus`. The triangle is split into three signed fans
/// around the focus, which works whether the focus is inside or outside.
inline double integrate_triangle(const std::function<double(const Vec3 &)> &f, const Vec3 &a, const Vec3 &b,
                                 const Vec3 &c, const Vec3 &focus, double tol = 1e-12) {
  const Vec3 n = (b - a).cross(c - a).normalized();
  const std::array<Vec3, 3> v = {a, b, c};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 &p = v[i], &q = v[(i + 1) % 3];
    double orient = (p - focus).cross(q - focus).dot(n);
    // fans whose apex lies on the edge line have zero area
    if (std::abs(orient) < 1e-13 * (q - p).squaredNorm())
      continue;
    total += (orient > 0.0 ? 1.0 : -1.0) * integrate_fan(f, focus, p, q, tol);
  }
  return total;
}

/// Orthogonal projection of r onto the plane of (a, b, c).
inline Vec3 project(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &r) {
  Vec3 n = (b - a).cross(c - a).normalized();
  return r - n * n.dot(r - a);
}

/// Exact integral of x^i y^j over the reference triangle (0,0), (1,0), (0,1).
inline double monomial_integral(int i, int j) {
  return std::tgamma(i + 1.0) * std::tgamma(j + 1.0) / std::tgamma(i + j + 3.0);
}

/// Tensor Gauss-Legendre rule collapsed onto a triangle (Duffy map), exact
/// for polynomials of degree 2n - 2. Returns points and weights summing to the area.
struct Sample {
  Vec3 point;
  double weight;
};

template <int Points = 20>
std::vector<Sample> collapsed_gauss(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  using rule = boost::math::quadrature::gauss<double, Points>;
  const auto &x = rule::abscissa();
  const auto &w = rule::weights();
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back(x[i]);
    weights.push_back(w[i]);
    if (x[i] != 0.0) {
      nodes.push_back(-x[i]);
      weights.push_back(w[i]);
    }
  }
  const double area2 = (b - a).cross(c - a).norm();
  std::vector<Sample> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      double u = 0.5 * (nodes[i] + 1.0), v = 0.5 * (nodes[k] + 1.0);
      // (u, v) in the unit square -> (u, (1 - u) v) in the reference triangle
      double xi = u, eta = (1.0 - u) * v;
      double wt = 0.25 * weights[i] * weights[k] * (1.0 - u) * area2;
      out.push_back({a + xi * (b - a) + eta * (c - a), wt});
    }
  return out;
}

/// Collapsed Gauss rule composed with the quintic grading u -> u^3 (10 - 15u + 6u^2)
/// in both square coordinates. Nodes cluster at all three edges, which keeps
/// the rule accurate for integrands with logarithmic edge behaviour.
template <int Points = 20>
std::vector<Sample> graded_gauss(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  using rule = boost::math::quadrature::gauss<double, Points>;
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < rule::abscissa().size(); ++i) {
    double x = rule::abscissa()[i], w = rule::weights()[i];
    for (double sx : {1.0, -1.0}) {
      if (sx < 0.0 && x == 0.0)
        continue;
      double t = 0.5 * (1.0 + sx * x);
      nodes.push_back(t * t * t * (10.0 - 15.0 * t + 6.0 * t * t));
      weights.push_back(0.5 * w * 30.0 * t * t * (1.0 - t) * (1.0 - t));
    }
  }
  const double area2 = (b - a).cross(c - a).norm();
  std::vector<Sample> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      double u = nodes[i], v = nodes[k];
      double wt = weights[i] * weights[k] * (1.0 - u) * area2;
      out.push_back({a + u * (b - a) + (1.0 - u) * v * (c - a), wt});
    }
  return out;
}

/// exp(-j k R) / (4 pi R) evaluated directly.
inline cplx green(double k, double R) { return std::exp(cplx(0.0, -k * R)) / (4.0 * csie::pi * R); }

/// Root of g on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)> &g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace oracle
