#pragma once

#include "csie/common.hpp"
#include "csie/mesh.hpp"

#include <array>
#include <memory>
#include <vector>

namespace csie {

/// One RWG function: current flows across the shared edge from the plus to the
/// minus triangle. Free vertices are the triangle corners opposite the edge.
struct RwgEdge {
  double length = 0.0;
  int plus = -1;
  int minus = -1;
  int free_plus = -1; // vertex index
  int free_minus = -1;
  int v0 = -1; // edge endpoints, v0 < v1
  int v1 = -1;
};

/// A basis function restricted to one triangle:
///   beta(r) = coef * (r - free_vertex),  div beta = 2 * coef,
/// with coef = +-l / (2A).
struct LocalBasis {
  int index = -1; // RWG index, -1 for boundary edges of open surfaces
  double coef = 0.0;
  Vec3 free_vertex = Vec3::Zero();
};

struct RwgOptions {
  /// Build functions on the interior edges of open surfaces too. Scattering
  /// jobs refuse this; it exists for patch-level tests and diagnostics.
  bool allow_open = false;
};

/// RWG space on the interior edges of a triangle mesh. Immutable after
/// construction and safe for concurrent reads.
class RwgSpace {
public:
  RwgSpace(std::shared_ptr<const TriangleMesh> mesh, std::vector<RwgEdge> edges)
      : mesh_(std::move(mesh)), edges_(std::move(edges)), local_(mesh_->num_triangles()) {
    for (int n = 0; n < size(); ++n) {
      const auto &e = edges_[n];
      attach(e.plus, n, +1.0, e.free_plus);
      attach(e.minus, n, -1.0, e.free_minus);
    }
  }

  int size() const { return static_cast<int>(edges_.size()); }
  const TriangleMesh &mesh() const { return *mesh_; }
  std::shared_ptr<const TriangleMesh> mesh_ptr() const { return mesh_; }
  const RwgEdge &edge(int n) const { return edges_[n]; }
  const std::vector<RwgEdge> &edges() const { return edges_; }

  /// The three local functions on triangle t, indexed by the local vertex opposite
  /// each edge. Boundary edges of open surfaces carry index -1.
  const std::array<LocalBasis, 3> &local(int t) const { return local_[t]; }

private:
  void attach(int t, int n, double sign, int free_vertex) {
    const auto &tri = mesh_->triangle(t);
    for (int k = 0; k < 3; ++k)
      if (tri[k] == free_vertex) {
        local_[t][k] = {n, sign * edges_[n].length / (2.0 * mesh_->area(t)), mesh_->vertex(free_vertex)};
        return;
      }
    throw GeometryError("free vertex not found on its triangle");
  }

  std::shared_ptr<const TriangleMesh> mesh_;
  std::vector<RwgEdge> edges_;
  std::vector<std::array<LocalBasis, 3>> local_;
};

/// Build the RWG space. The plus triangle of each edge is the one traversing it
/// from the lower to the higher vertex index.
inline RwgSpace build_rwg(std::shared_ptr<const TriangleMesh> mesh, RwgOptions opts = {}) {
  auto report = validate_mesh(*mesh);
  if (!opts.allow_open && !report.closed)
    throw GeometryError("RWG space requires a closed surface (" + std::to_string(report.boundary_edges) +
                        " boundary edges, " + std::to_string(report.nonmanifold_edges) +
                        " non-manifold edges)");
  if (report.nonmanifold_edges > 0)
    throw GeometryError("junctions (edges shared by more than two triangles) are not supported");
  if (!report.orientable)
    throw GeometryError("triangle winding is inconsistent; call orient_outward() first");

  auto table = detail::build_edge_table(*mesh);
  std::vector<RwgEdge> edges;
  edges.reserve(table.edges.size());
  for (std::size_t e = 0; e < table.edges.size(); ++e) {
    const auto &uses = table.uses[e];
    if (uses.size() != 2)
      continue;
    const auto &up = uses[0].ascending ? uses[0] : uses[1];
    const auto &um = uses[0].ascending ? uses[1] : uses[0];
    RwgEdge r;
    r.v0 = table.edges[e].first;
    r.v1 = table.edges[e].second;
    r.length = (mesh->vertex(r.v0) - mesh->vertex(r.v1)).norm();
    r.plus = up.triangle;
    r.minus = um.triangle;
    r.free_plus = mesh->triangle(up.triangle)[up.local];
    r.free_minus = mesh->triangle(um.triangle)[um.local];
    edges.push_back(r);
  }
  return RwgSpace(std::move(mesh), std::move(edges));
}

inline RwgSpace build_rwg(const TriangleMesh &mesh, RwgOptions opts = {}) {
  return build_rwg(std::make_shared<const TriangleMesh>(mesh), opts);
}

struct RwgValue {
  Vec3 value;
  double divergence;
};

/// Evaluate function n at a point on triangle `tri`, which must be its plus or
/// minus triangle. Points on the shared edge are evaluated on the named side.
inline RwgValue rwg_eval(const RwgSpace &space, int n, int tri, const Vec3 &r) {
  const auto &e = space.edge(n);
  const auto &m = space.mesh();
  double sign;
  int free_vertex;
  if (tri == e.plus) {
    sign = 1.0;
    free_vertex = e.free_plus;
  } else if (tri == e.minus) {
    sign = -1.0;
    free_vertex = e.free_minus;
  } else {
    throw DomainError("triangle " + std::to_string(tri) + " is not in the support of RWG " + std::to_string(n));
  }
  double area = m.area(tri);
  return {sign * e.length / (2.0 * area) * (r - m.vertex(free_vertex)), sign * e.length / area};
}

/// Evaluate function n at a point on its support, locating the triangle by
/// barycentric containment. Throws DomainError when r lies on neither triangle.
inline RwgValue rwg_eval(const RwgSpace &space, int n, const Vec3 &r) {
  const auto &e = space.edge(n);
  const auto &m = space.mesh();
  for (int tri : {e.plus, e.minus}) {
    const Vec3 &a = m.corner(tri, 0), &b = m.corner(tri, 1), &c = m.corner(tri, 2);
    const Vec3 &nrm = m.normal(tri);
    double scale = m.diameter(tri);
    if (std::abs((r - a).dot(nrm)) > 1e-9 * scale)
      continue;
    double twice = 2.0 * m.area(tri);
    double l0 = (c - b).cross(r - b).dot(nrm) / twice;
    double l1 = (a - c).cross(r - c).dot(nrm) / twice;
    double l2 = 1.0 - l0 - l1;
    constexpr double tol = -1e-12;
    if (l0 >= tol && l1 >= tol && l2 >= tol)
      return rwg_eval(space, n, tri, r);
  }
  throw DomainError("point is not on the support of RWG " + std::to_string(n));
}

} // namespace csie
