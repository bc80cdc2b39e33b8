// Writes the committed test geometries into a directory (default data/meshes).

#include "csie/mesh.hpp"
#include "csie/shapes.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char **argv) {
  namespace fs = std::filesystem;
  const fs::path dir = argc > 1 ? argv[1] : "data/meshes";
  fs::create_directories(dir);
  using csie::MeshFormat;
  namespace shapes = csie::shapes;

  struct Item {
    const char *name;
    csie::TriangleMesh mesh;
    MeshFormat format;
  };
  const Item items[] = {
      {"cube_12.off", shapes::cube(1.0, 1), MeshFormat::off},
      {"cube_108.off", shapes::cube(1.0, 3), MeshFormat::off},
      {"icosahedron.msh", shapes::icosahedron(1.0), MeshFormat::gmsh_v2},
      {"sphere_f3.off", shapes::geodesic_sphere(1.0, 3), MeshFormat::off},
      {"sphere_f5.off", shapes::geodesic_sphere(1.0, 5), MeshFormat::off},
      {"wedge_f40.off", shapes::wedge(0.2, 0.2, 0.06), MeshFormat::off},
      {"pyramid_f24.off", shapes::pyramid(0.135, 0.19), MeshFormat::off},
  };
  for (const auto &it : items) {
    csie::save_mesh((dir / it.name).string(), it.mesh, it.format);
    std::cout << it.name << ": " << it.mesh.num_triangles() << " triangles, " << it.mesh.num_vertices()
              << " vertices\n";
  }
  return 0;
}
