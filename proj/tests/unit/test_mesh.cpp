#include "csie/mesh.hpp"
#include "csie/shapes.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace csie;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const char *cube_off = R"(OFF
# unit cube
8 12 0
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
3 0 2 1
3 0 3 2
3 4 5 6
3 4 6 7
3 0 1 5
3 0 5 4
3 1 2 6
3 1 6 5
3 2 3 7
3 2 7 6
3 3 0 4
3 3 4 7
)";

TriangleMesh parse_off(const std::string &text) {
  std::istringstream in(text);
  return read_mesh(in, MeshFormat::off);
}

int format_error_line(const std::string &text, MeshFormat fmt) {
  std::istringstream in(text);
  try {
    read_mesh(in, fmt);
  } catch (const FormatError &e) {
    return e.line();
  }
  return -1;
}

} // namespace

TEST_CASE("OFF cube parses with outward winding and closed topology", "[mesh]") {
  auto mesh = parse_off(cube_off);
  REQUIRE(mesh.num_vertices() == 8);
  REQUIRE(mesh.num_triangles() == 12);
  auto rep = validate_mesh(mesh);
  CHECK(rep.closed);
  CHECK(rep.orientable);
  CHECK(rep.euler == 2);
  CHECK(rep.boundary_edges == 0);
  CHECK(rep.nonmanifold_edges == 0);
  CHECK_THAT(mesh.signed_volume(), WithinRel(1.0, 1e-14));
  // face z = 0 has normal -z
  CHECK_THAT(mesh.normal(0).z(), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(mesh.area(0), WithinRel(0.5, 1e-15));
}

TEST_CASE("orient_outward repairs inverted and mixed winding", "[mesh]") {
  auto mesh = parse_off(cube_off);
  for (int t : {0, 3, 7, 8})
    mesh.flip(t);
  CHECK_FALSE(validate_mesh(mesh).orientable);
  orient_outward(mesh);
  CHECK(validate_mesh(mesh).orientable);
  CHECK_THAT(mesh.signed_volume(), WithinRel(1.0, 1e-14));

  auto inverted = parse_off(cube_off);
  for (int t = 0; t < 12; ++t)
    inverted.flip(t);
  CHECK(inverted.signed_volume() < 0.0);
  orient_outward(inverted);
  CHECK(inverted.signed_volume() > 0.0);
}

TEST_CASE("OFF reader reports the offending line", "[mesh]") {
  CHECK(format_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n", MeshFormat::off) == 5);
  CHECK(format_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n", MeshFormat::off) == 6);
  CHECK(format_error_line("OFF\n3 1 0\n0 0 0\n1 0 x\n0 1 0\n3 0 1 2\n", MeshFormat::off) == 4);
  CHECK(format_error_line("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n4 0 1 3 2\n", MeshFormat::off) == 7);
  CHECK(format_error_line("PLY\n", MeshFormat::off) == 1);
}

TEST_CASE("Gmsh v2 reader accepts triangles and skips other elements", "[mesh]") {
  const char *text = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
1
2 1 "surface"
$EndPhysicalNames
$Nodes
4
1 0 0 0
2 1 0 0
3 0 1 0
4 0 0 1
$EndNodes
$Elements
6
1 15 2 0 1 1
2 1 2 0 1 1 2
3 2 2 0 1 1 3 2
4 2 2 0 1 1 2 4
5 2 2 0 1 1 4 3
6 2 2 0 1 2 3 4
$EndElements
)";
  std::istringstream in(text);
  auto mesh = read_mesh(in, MeshFormat::gmsh_v2);
  CHECK(mesh.num_vertices() == 4);
  CHECK(mesh.num_triangles() == 4);
  CHECK(validate_mesh(mesh).closed);
  CHECK_THAT(std::abs(mesh.signed_volume()), WithinRel(1.0 / 6.0, 1e-14));
}

TEST_CASE("Gmsh reader rejects binary and unknown node references", "[mesh]") {
  CHECK(format_error_line("$MeshFormat\n2.2 1 8\n$EndMeshFormat\n", MeshFormat::gmsh_v2) == 2);
  CHECK(format_error_line("$MeshFormat\n4.1 0 8\n$EndMeshFormat\n", MeshFormat::gmsh_v2) == 2);
  const char *bad_node = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n"
                         "$Elements\n1\n1 2 2 0 1 1 2 9\n$EndElements\n";
  CHECK(format_error_line(bad_node, MeshFormat::gmsh_v2) == 12);
}

TEST_CASE("mesh write/read round trip is exact in both formats", "[mesh]") {
  auto mesh = shapes::geodesic_sphere(0.7, 2);
  for (auto fmt : {MeshFormat::off, MeshFormat::gmsh_v2}) {
    std::stringstream ss;
    if (fmt == MeshFormat::off)
      write_off(ss, mesh);
    else
      write_gmsh_v2(ss, mesh);
    auto back = read_mesh(ss, fmt);
    REQUIRE(back.num_triangles() == mesh.num_triangles());
    for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
      CHECK(back.vertex(static_cast<int>(i)) == mesh.vertex(static_cast<int>(i)));
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
      CHECK(back.triangle(static_cast<int>(t)) == mesh.triangle(static_cast<int>(t)));
  }
}

TEST_CASE("degenerate triangles are rejected", "[mesh]") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(TriangleMesh(v, {{0, 1, 2}}), GeometryError);
  CHECK_THROWS_AS(TriangleMesh(v, {{0, 1, 5}}), GeometryError);
}

TEST_CASE("format is inferred from the file extension", "[mesh]") {
  CHECK(mesh_format_from_path("a/b/c.off") == MeshFormat::off);
  CHECK(mesh_format_from_path("c.msh") == MeshFormat::gmsh_v2);
  CHECK_THROWS_AS(mesh_format_from_path("c.stl"), ConfigError);
  CHECK(parse_mesh_format("gmsh") == MeshFormat::gmsh_v2);
  CHECK_THROWS_AS(parse_mesh_format("vtk"), ConfigError);
}

TEST_CASE("open plate is reported with boundary edges", "[mesh]") {
  auto rep = validate_mesh(shapes::plate(1.0));
  CHECK_FALSE(rep.closed);
  CHECK(rep.boundary_edges == 4);
}

TEST_CASE("generated shapes have the documented counts and are closed", "[mesh]") {
  struct Case {
    TriangleMesh mesh;
    std::size_t faces;
    double volume;
  };
  const double a = 0.135, h = 0.19;
  Case cases[] = {
      {shapes::cube(2.0, 1), 12, 8.0},
      {shapes::cube(1.0, 3), 108, 1.0},
      {shapes::wedge(0.2, 0.2, 0.06), 40, 0.5 * 0.2 * 0.2 * 0.06},
      {shapes::pyramid(a, h), 24, a * a * h / 3.0},
  };
  for (auto &c : cases) {
    CHECK(c.mesh.num_triangles() == c.faces);
    auto rep = validate_mesh(c.mesh);
    CHECK(rep.closed);
    CHECK(rep.orientable);
    CHECK(rep.euler == 2);
    CHECK_THAT(c.mesh.signed_volume(), WithinRel(c.volume, 1e-12));
  }
  auto sphere = shapes::geodesic_sphere(1.0, 5);
  CHECK(sphere.num_triangles() == 500);
  CHECK(validate_mesh(sphere).euler == 2);
  // inscribed polyhedron: slightly below the ball volume, within 3 percent at frequency 5
  CHECK(sphere.signed_volume() < 4.0 * pi / 3.0);
  CHECK(sphere.signed_volume() > 0.97 * 4.0 * pi / 3.0);
}
