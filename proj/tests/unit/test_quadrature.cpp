#include "csie/quadrature.hpp"

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace csie;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Polynomial degree each supported order integrates exactly.
int exact_degree(int order) {
  switch (order) {
  case 1:
    return 1;
  case 2:
    return 2;
  case 3:
    return 4;
  case 5:
    return 5;
  case 7:
    return 8;
  }
  return -1;
}

} // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree", "[quadrature]") {
  for (int order : {1, 2, 3, 5, 7}) {
    auto rule = triangle_rule(order);
    const int deg = exact_degree(order);
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j) {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          // barycentric (l0, l1, l2) -> reference point x = l1, y = l2
          double x = rule.points[q][1], y = rule.points[q][2];
          sum += rule.weights[q] * std::pow(x, i) * std::pow(y, j);
        }
        // weights are normalised to unit total, the reference triangle has area 1/2
        INFO("order " << order << " monomial x^" << i << " y^" << j);
        CHECK_THAT(0.5 * sum, WithinRel(oracle::monomial_integral(i, j), 1e-14));
      }
  }
}

TEST_CASE("triangle rules have positive weights summing to one and interior points", "[quadrature]") {
  for (int order : {1, 2, 3, 5, 7}) {
    auto rule = triangle_rule(order);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      CHECK(rule.weights[q] > 0.0);
      sum += rule.weights[q];
      const auto &l = rule.points[q];
      CHECK_THAT(l[0] + l[1] + l[2], WithinAbs(1.0, 1e-15));
      CHECK(std::min({l[0], l[1], l[2]}) > 0.0);
    }
    CHECK_THAT(sum, WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("order 3 is not exact for degree 5, order 7 is not exact for degree 9", "[quadrature]") {
  auto err = [](int order, int i, int j) {
    auto rule = triangle_rule(order);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q)
      sum += rule.weights[q] * std::pow(rule.points[q][1], i) * std::pow(rule.points[q][2], j);
    return std::abs(0.5 * sum - oracle::monomial_integral(i, j));
  };
  CHECK(err(3, 5, 0) > 1e-8);
  CHECK(err(7, 9, 0) > 1e-10);
}

TEST_CASE("unsupported orders are configuration errors", "[quadrature]") {
  for (int order : {0, 4, 6, 8, -1})
    CHECK_THROWS_AS(triangle_rule(order), ConfigError);
}

TEST_CASE("mapped rule integrates a polynomial on a physical triangle", "[quadrature]") {
  Vec3 a(0.3, -0.2, 1.0), b(1.1, 0.4, 0.7), c(-0.5, 0.9, 0.2);
  auto f = [](const Vec3 &p) { return p.x() * p.x() * p.y() - 2.0 * p.z() * p.z() * p.z() * p.x() + 1.0; };
  double ref = 0.0;
  for (const auto &s : oracle::collapsed_gauss(a, b, c))
    ref += s.weight * f(s.point);
  double area = 0.5 * (b - a).cross(c - a).norm();
  for (int order : {3, 5, 7}) {
    auto rule = triangle_rule(order);
    auto pts = rule.map(a, b, c);
    double sum = 0.0;
    for (std::size_t q = 0; q < pts.size(); ++q)
      sum += rule.weights[q] * area * f(pts[q]);
    CHECK_THAT(sum, WithinRel(ref, 1e-13));
  }
}
