#pragma once

// Parametric test geometries. Every generator returns a closed, outward
// oriented mesh unless noted.

#include "csie/common.hpp"
#include "csie/mesh.hpp"

#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

namespace csie::shapes {

namespace detail {

/// Collects triangles and merges coincident vertices (rounded key).
class MeshBuilder {
public:
  explicit MeshBuilder(double scale) : quantum_(1e-9 * scale) {}

  int vertex(const Vec3 &p) {
    auto key = std::make_tuple(std::llround(p.x() / quantum_), std::llround(p.y() / quantum_),
                               std::llround(p.z() / quantum_));
    auto [it, inserted] = index_.try_emplace(key, static_cast<int>(verts_.size()));
    if (inserted)
      verts_.push_back(p);
    return it->second;
  }

  void triangle(const Vec3 &a, const Vec3 &b, const Vec3 &c) { tris_.push_back({vertex(a), vertex(b), vertex(c)}); }

  void quad(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d) {
    triangle(a, b, c);
    triangle(a, c, d);
  }

  TriangleMesh build(bool orient = true) {
    TriangleMesh m(verts_, tris_);
    if (orient)
      orient_outward(m);
    return m;
  }

private:
  double quantum_;
  std::map<std::tuple<long long, long long, long long>, int> index_;
  std::vector<Vec3> verts_;
  std::vector<TriangleMesh::Triangle> tris_;
};

} // namespace detail

/// Axis-aligned cube centred at the origin, each face split into
/// divisions x divisions squares of two triangles. divisions = 1 gives F = 12.
inline TriangleMesh cube(double side, int divisions = 1) {
  detail::MeshBuilder b(side);
  const double h = side / 2.0;
  for (int axis = 0; axis < 3; ++axis)
    for (double s : {-1.0, 1.0}) {
      int u = (axis + 1) % 3, v = (axis + 2) % 3;
      auto point = [&](int i, int k) {
        Vec3 p;
        p[axis] = s * h;
        p[u] = -h + side * i / divisions;
        p[v] = -h + side * k / divisions;
        return p;
      };
      for (int i = 0; i < divisions; ++i)
        for (int k = 0; k < divisions; ++k)
          b.quad(point(i, k), point(i + 1, k), point(i + 1, k + 1), point(i, k + 1));
    }
  return b.build();
}

/// Regular icosahedron inscribed in a sphere of the given radius (F = 20, V = 12).
inline TriangleMesh icosahedron(double radius = 1.0) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto &p : v)
    p = p.normalized() * radius;
  std::vector<TriangleMesh::Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  TriangleMesh m(std::move(v), std::move(f));
  orient_outward(m);
  return m;
}

/// Geodesic sphere: every icosahedron face split into frequency^2 triangles,
/// vertices projected onto the sphere. F = 20 frequency^2.
inline TriangleMesh geodesic_sphere(double radius, int frequency) {
  if (frequency < 1)
    throw ConfigError("geodesic frequency must be >= 1");
  auto ico = icosahedron(1.0);
  detail::MeshBuilder b(radius);
  const int n = frequency;
  for (std::size_t t = 0; t < ico.num_triangles(); ++t) {
    const Vec3 &A = ico.corner(static_cast<int>(t), 0), &B = ico.corner(static_cast<int>(t), 1),
               &C = ico.corner(static_cast<int>(t), 2);
    auto p = [&](int i, int k) { // i steps towards B, k towards C
      Vec3 q = A + (B - A) * (double(i) / n) + (C - A) * (double(k) / n);
      return Vec3(q.normalized() * radius);
    };
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n - i; ++k) {
        b.triangle(p(i, k), p(i + 1, k), p(i, k + 1));
        if (k < n - i - 1)
          b.triangle(p(i + 1, k), p(i + 1, k + 1), p(i, k + 1));
      }
  }
  return b.build();
}

/// Triangular prism ("wedge"): isosceles cross-section of base `width` (x)
/// and `height` (y) in the xy-plane, extruded `depth` along z, centroid at the
/// origin. Cross-section perimeter split into 4 base and 3+3 slanted segments,
/// each cap fanned from its centroid: F = 40, N = 60.
inline TriangleMesh wedge(double width, double height, double depth) {
  detail::MeshBuilder b(std::max({width, height, depth}));
  const Vec3 left(-width / 2, -height / 3, 0), right(width / 2, -height / 3, 0), apex(0, 2 * height / 3, 0);
  std::vector<Vec3> ring; // counter-clockwise around +z
  auto add_segment = [&](const Vec3 &from, const Vec3 &to, int parts) {
    for (int i = 0; i < parts; ++i)
      ring.push_back(from + (to - from) * (double(i) / parts));
  };
  add_segment(left, right, 4);
  add_segment(right, apex, 3);
  add_segment(apex, left, 3);
  const Vec3 dz(0, 0, depth / 2);
  const Vec3 centre = Vec3::Zero();
  const std::size_t m = ring.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 &p = ring[i], &q = ring[(i + 1) % m];
    b.triangle(centre + dz, p + dz, q + dz);
    b.triangle(centre - dz, q - dz, p - dz);
    b.quad(p - dz, q - dz, q + dz, p + dz);
  }
  return b.build();
}

/// Square pyramid with base edge `base` in a plane of constant z and apex
/// `height` above it, volume centroid at the origin. The base is split into
/// 8 triangles around its centre and every side face into 4 by midpoint
/// subdivision: F = 24, N = 36.
inline TriangleMesh pyramid(double base, double height) {
  detail::MeshBuilder b(std::max(base, height));
  const double zb = -height / 4.0, h = base / 2.0;
  const Vec3 apex(0, 0, zb + height);
  const std::array<Vec3, 4> c = {Vec3(-h, -h, zb), Vec3(h, -h, zb), Vec3(h, h, zb), Vec3(-h, h, zb)};
  const Vec3 centre(0, 0, zb);
  for (int i = 0; i < 4; ++i) {
    const Vec3 &p = c[i], &q = c[(i + 1) % 4];
    Vec3 mid = 0.5 * (p + q);
    // base fan: two triangles per base edge
    b.triangle(centre, mid, p);
    b.triangle(centre, q, mid);
    // side face split at edge midpoints
    Vec3 mp = 0.5 * (p + apex), mq = 0.5 * (q + apex);
    b.triangle(p, mid, mp);
    b.triangle(mid, q, mq);
    b.triangle(mid, mq, mp);
    b.triangle(mp, mq, apex);
  }
  return b.build();
}

/// Flat square plate of two triangles in the z = 0 plane (open surface).
inline TriangleMesh plate(double side) {
  const double h = side / 2.0;
  std::vector<Vec3> v = {{-h, -h, 0}, {h, -h, 0}, {h, h, 0}, {-h, h, 0}};
  return TriangleMesh(std::move(v), {{0, 1, 2}, {0, 2, 3}});
}

} // namespace csie::shapes
