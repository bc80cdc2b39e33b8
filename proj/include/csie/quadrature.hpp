#pragma once

#include "csie/common.hpp"

#include <array>
#include <string>
#include <vector>

namespace csie {

/// Symmetric Gauss rule on a triangle in barycentric coordinates. Weights sum
/// to one; multiply by the triangle area at the use site.
struct TriangleQuadratureRule {
  int order = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }

  /// Physical quadrature points on triangle (a, b, c).
  std::vector<Vec3> map(const Vec3 &a, const Vec3 &b, const Vec3 &c) const {
    std::vector<Vec3> out;
    out.reserve(points.size());
    for (const auto &l : points)
      out.push_back(l[0] * a + l[1] * b + l[2] * c);
    return out;
  }
};

namespace detail {

inline void add_centroid(TriangleQuadratureRule &r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

inline void add_orbit3(TriangleQuadratureRule &r, double a, double w) {
  double b = 1.0 - 2.0 * a;
  r.points.push_back({a, a, b});
  r.points.push_back({a, b, a});
  r.points.push_back({b, a, a});
  r.weights.insert(r.weights.end(), 3, w);
}

inline void add_orbit6(TriangleQuadratureRule &r, double a, double b, double w) {
  double c = 1.0 - a - b;
  r.points.push_back({a, b, c});
  r.points.push_back({a, c, b});
  r.points.push_back({b, a, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  r.points.push_back({c, b, a});
  r.weights.insert(r.weights.end(), 6, w);
}

} // namespace detail

/// Rules with positive weights only. Requests for degree 3 and 7 return the
/// 6-point degree-4 and 16-point degree-8 rules, which contain the requested
/// exactness. Constants were refined to full double precision from the
/// Dunavant tables by solving the moment equations.
inline TriangleQuadratureRule triangle_rule(int order) {
  TriangleQuadratureRule r;
  r.order = order;
  switch (order) {
  case 1:
    detail::add_centroid(r, 1.0);
    break;
  case 2:
    detail::add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    break;
  case 3:
    detail::add_orbit3(r, 0.44594849091596488632, 0.22338158967801146570);
    detail::add_orbit3(r, 0.09157621350977074346, 0.10995174365532186764);
    break;
  case 5:
    detail::add_centroid(r, 0.225);
    detail::add_orbit3(r, 0.47014206410511508977, 0.13239415278850618074);
    detail::add_orbit3(r, 0.10128650732345633880, 0.12593918054482715260);
    break;
  case 7:
    detail::add_centroid(r, 0.14431560767778716825);
    detail::add_orbit3(r, 0.45929258829272315603, 0.095091634267284624794);
    detail::add_orbit3(r, 0.17056930775176020662, 0.10321737053471825028);
    detail::add_orbit3(r, 0.050547228317030975458, 0.032458497623198080311);
    detail::add_orbit6(r, 0.0083947774099576053372, 0.26311282963463811342, 0.027230314174434994265);
    break;
  default:
    throw ConfigError("unsupported triangle quadrature order " + std::to_string(order) +
                      " (supported: 1, 2, 3, 5, 7)");
  }
  return r;
}

} // namespace csie
