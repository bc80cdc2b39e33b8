#include "csie/rwg.hpp"
#include "csie/shapes.hpp"

#include <catch_amalgamated.hpp>

using namespace csie;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("RWG count equals the edge count of a closed mesh", "[rwg]") {
  CHECK(build_rwg(shapes::cube(1.0, 1)).size() == 18);
  CHECK(build_rwg(shapes::wedge(0.2, 0.2, 0.06)).size() == 60);
  CHECK(build_rwg(shapes::pyramid(0.135, 0.19)).size() == 36);
  CHECK(build_rwg(shapes::geodesic_sphere(1.0, 5)).size() == 750);
}

TEST_CASE("RWG divergence is +l/A on the plus and -l/A on the minus triangle", "[rwg]") {
  auto space = build_rwg(shapes::geodesic_sphere(1.0, 2));
  const auto &mesh = space.mesh();
  for (int n = 0; n < space.size(); ++n) {
    const auto &e = space.edge(n);
    Vec3 cp = mesh.centroid(e.plus), cm = mesh.centroid(e.minus);
    auto vp = rwg_eval(space, n, e.plus, cp);
    auto vm = rwg_eval(space, n, e.minus, cm);
    CHECK_THAT(vp.divergence, WithinRel(e.length / mesh.area(e.plus), 1e-12));
    CHECK_THAT(vm.divergence, WithinRel(-e.length / mesh.area(e.minus), 1e-12));
    // divergence integrates to zero over the support
    CHECK_THAT(vp.divergence * mesh.area(e.plus) + vm.divergence * mesh.area(e.minus), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("RWG normal component is continuous and unit across its edge", "[rwg]") {
  auto space = build_rwg(shapes::cube(1.0, 2));
  const auto &mesh = space.mesh();
  for (int n = 0; n < space.size(); ++n) {
    const auto &e = space.edge(n);
    const Vec3 &v0 = mesh.vertex(e.v0), &v1 = mesh.vertex(e.v1);
    for (double t : {0.2, 0.5, 0.9}) {
      Vec3 p = v0 + t * (v1 - v0);
      Vec3 lhat = (v1 - v0).normalized();
      // in-plane normal pointing away from the free vertex on each side
      auto flux = [&](int tri, const Vec3 &free) {
        Vec3 nrm = mesh.normal(tri);
        Vec3 u = lhat.cross(nrm);
        if (u.dot(p - free) < 0.0)
          u = -u;
        return rwg_eval(space, n, tri, p).value.dot(u);
      };
      double out_plus = flux(e.plus, mesh.vertex(e.free_plus));
      double out_minus = flux(e.minus, mesh.vertex(e.free_minus));
      CHECK_THAT(out_plus, WithinRel(1.0, 1e-12));   // leaves T+ across the edge
      CHECK_THAT(out_minus, WithinRel(-1.0, 1e-12)); // enters T- across the edge
    }
    // no flux through the other two edges of T+
    const Vec3 &q = mesh.vertex(e.free_plus);
    for (const Vec3 &corner : {v0, v1}) {
      Vec3 mid = 0.5 * (q + corner);
      Vec3 nrm = mesh.normal(e.plus);
      Vec3 u = (corner - q).normalized().cross(nrm);
      CHECK_THAT(rwg_eval(space, n, e.plus, mid).value.dot(u), WithinAbs(0.0, 1e-14));
    }
  }
}

TEST_CASE("rwg_eval outside the support is a domain error", "[rwg]") {
  auto space = build_rwg(shapes::cube(1.0, 2));
  const auto &e = space.edge(0);
  Vec3 far(5.0, 5.0, 5.0);
  CHECK_THROWS_AS(rwg_eval(space, 0, far), DomainError);
  auto v = rwg_eval(space, 0, space.mesh().centroid(e.plus));
  CHECK(v.value.norm() > 0.0);
}

TEST_CASE("open and non-manifold meshes are refused", "[rwg]") {
  CHECK_THROWS_AS(build_rwg(shapes::plate(1.0)), GeometryError);
  RwgOptions opts;
  opts.allow_open = true;
  CHECK(build_rwg(shapes::plate(1.0), opts).size() == 1);

  // three triangles sharing one edge
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
  TriangleMesh fin(v, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}});
  CHECK_THROWS_AS(build_rwg(fin, opts), GeometryError);
}

TEST_CASE("inconsistent winding is refused", "[rwg]") {
  auto mesh = shapes::cube(1.0, 1);
  mesh.flip(0);
  CHECK_THROWS_AS(build_rwg(mesh), GeometryError);
}
