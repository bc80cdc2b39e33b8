#pragma once

#include "csie/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace csie {

enum class MeshFormat { gmsh_v2, off };

inline MeshFormat parse_mesh_format(const std::string &name) {
  if (name == "gmsh" || name == "gmsh-ascii-v2" || name == "msh")
    return MeshFormat::gmsh_v2;
  if (name == "off")
    return MeshFormat::off;
  throw ConfigError("unknown mesh format '" + name + "' (expected gmsh or off)");
}

inline const char *to_string(MeshFormat f) { return f == MeshFormat::off ? "off" : "gmsh"; }

/// Guess the format from the file extension (.msh -> gmsh, .off -> off).
inline MeshFormat mesh_format_from_path(const std::string &path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "msh")
    return MeshFormat::gmsh_v2;
  if (ext == "off")
    return MeshFormat::off;
  throw ConfigError("cannot infer mesh format from '" + path + "'");
}

inline constexpr double min_triangle_area = 1e-14;

/// Flat triangulated surface in meters. Areas and unit normals follow the vertex
/// winding (right-hand rule), so an outward-oriented closed surface has outward normals.
class TriangleMesh {
public:
  using Triangle = std::array<int, 3>;

  TriangleMesh() = default;

  TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    const int nv = static_cast<int>(vertices_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t)
      for (int v : triangles_[t])
        if (v < 0 || v >= nv)
          throw GeometryError("triangle " + std::to_string(t) + " references vertex " +
                              std::to_string(v) + " outside [0, " + std::to_string(nv) + ")");
    update_geometry();
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const std::vector<Vec3> &vertices() const { return vertices_; }
  const std::vector<Triangle> &triangles() const { return triangles_; }
  const Vec3 &vertex(int i) const { return vertices_[i]; }
  const Triangle &triangle(int t) const { return triangles_[t]; }
  const Vec3 &corner(int t, int k) const { return vertices_[triangles_[t][k]]; }

  const Vec3 &normal(int t) const { return normals_[t]; }
  double area(int t) const { return areas_[t]; }
  const Vec3 &centroid(int t) const { return centroids_[t]; }
  /// Longest edge of triangle t.
  double diameter(int t) const { return diameters_[t]; }

  double max_diameter() const {
    return diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
  }
  double mean_edge_length() const;

  /// Enclosed volume by the divergence theorem; positive for outward winding.
  double signed_volume() const {
    double v = 0.0;
    for (std::size_t t = 0; t < triangles_.size(); ++t)
      v += corner(t, 0).dot(corner(t, 1).cross(corner(t, 2)));
    return v / 6.0;
  }

  void flip(int t) {
    std::swap(triangles_[t][1], triangles_[t][2]);
    normals_[t] = -normals_[t];
  }

  void scale(double factor) {
    for (auto &v : vertices_)
      v *= factor;
    update_geometry();
  }

private:
  void update_geometry() {
    const std::size_t nt = triangles_.size();
    normals_.resize(nt);
    areas_.resize(nt);
    centroids_.resize(nt);
    diameters_.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      const Vec3 &a = corner(t, 0), &b = corner(t, 1), &c = corner(t, 2);
      Vec3 cr = (b - a).cross(c - a);
      double twice = cr.norm();
      areas_[t] = 0.5 * twice;
      if (areas_[t] < min_triangle_area)
        throw GeometryError("degenerate triangle " + std::to_string(t) + " (area " +
                            std::to_string(areas_[t]) + " m^2)");
      normals_[t] = cr / twice;
      centroids_[t] = (a + b + c) / 3.0;
      diameters_[t] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    }
  }

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  std::vector<Vec3> centroids_;
  std::vector<double> diameters_;
};

namespace detail {

inline std::uint64_t edge_key(int a, int b) {
  auto lo = static_cast<std::uint64_t>(std::min(a, b));
  auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

/// One use of an undirected edge by a triangle: which triangle, which local
/// edge (opposite local vertex `local`), and whether the triangle traverses it
/// from the lower to the higher vertex index.
struct EdgeUse {
  int triangle;
  int local;
  bool ascending;
};

/// Undirected edges in first-appearance order with all triangle uses.
struct EdgeTable {
  std::vector<std::pair<int, int>> edges; // (lo, hi) vertex indices
  std::vector<std::vector<EdgeUse>> uses;
};

inline EdgeTable build_edge_table(const TriangleMesh &mesh) {
  EdgeTable table;
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(mesh.num_triangles() * 2);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto &tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(table.edges.size()));
      if (inserted) {
        table.edges.emplace_back(std::min(a, b), std::max(a, b));
        table.uses.emplace_back();
      }
      table.uses[it->second].push_back({t, k, a < b});
    }
  }
  return table;
}

} // namespace detail

inline double TriangleMesh::mean_edge_length() const {
  auto table = detail::build_edge_table(*this);
  if (table.edges.empty())
    return 0.0;
  double sum = 0.0;
  for (auto [a, b] : table.edges)
    sum += (vertices_[a] - vertices_[b]).norm();
  return sum / static_cast<double>(table.edges.size());
}

struct MeshReport {
  bool closed = false;
  /// True when every manifold edge is traversed in opposite directions by its two triangles.
  bool orientable = false;
  int euler = 0;
  int boundary_edges = 0;
  int nonmanifold_edges = 0;
  int num_vertices = 0;
  int num_edges = 0;
  int num_triangles = 0;
  double signed_volume = 0.0;
};

inline MeshReport validate_mesh(const TriangleMesh &mesh) {
  auto table = detail::build_edge_table(mesh);
  MeshReport r;
  r.num_vertices = static_cast<int>(mesh.num_vertices());
  r.num_edges = static_cast<int>(table.edges.size());
  r.num_triangles = static_cast<int>(mesh.num_triangles());
  r.euler = r.num_vertices - r.num_edges + r.num_triangles;
  r.orientable = true;
  for (const auto &uses : table.uses) {
    if (uses.size() == 1)
      ++r.boundary_edges;
    else if (uses.size() > 2)
      ++r.nonmanifold_edges;
    else if (uses[0].ascending == uses[1].ascending)
      r.orientable = false;
  }
  r.closed = r.boundary_edges == 0 && r.nonmanifold_edges == 0 && r.num_triangles > 0;
  r.signed_volume = mesh.signed_volume();
  return r;
}

inline std::ostream &operator<<(std::ostream &os, const MeshReport &r) {
  return os << "V=" << r.num_vertices << " E=" << r.num_edges << " F=" << r.num_triangles
            << " euler=" << r.euler << " closed=" << (r.closed ? "yes" : "no")
            << " orientable=" << (r.orientable ? "yes" : "no")
            << " boundary_edges=" << r.boundary_edges;
}

/// Make the winding consistent by breadth-first propagation from the lowest
/// triangle of each connected component, then flip each closed component so
/// its enclosed volume is positive (normals outward). Returns the number of
/// triangles flipped. Throws GeometryError if the surface is non-orientable.
inline int orient_outward(TriangleMesh &mesh) {
  const int nt = static_cast<int>(mesh.num_triangles());
  auto table = detail::build_edge_table(mesh);
  std::vector<std::vector<int>> tri_edges(nt);
  for (int e = 0; e < static_cast<int>(table.edges.size()); ++e)
    for (const auto &u : table.uses[e])
      tri_edges[u.triangle].push_back(e);

  // flip_state[t]: -1 unvisited, 0 keep, 1 flip
  std::vector<int> flip_state(nt, -1);
  std::vector<int> component(nt, -1);
  int ncomp = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (flip_state[seed] != -1)
      continue;
    flip_state[seed] = 0;
    component[seed] = ncomp;
    std::queue<int> q;
    q.push(seed);
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (int e : tri_edges[t]) {
        const auto &uses = table.uses[e];
        if (uses.size() != 2)
          continue;
        const auto &self = uses[0].triangle == t ? uses[0] : uses[1];
        const auto &other = uses[0].triangle == t ? uses[1] : uses[0];
        bool self_asc = self.ascending != (flip_state[t] == 1);
        int want = (other.ascending == self_asc) ? 1 : 0;
        if (flip_state[other.triangle] == -1) {
          flip_state[other.triangle] = want;
          component[other.triangle] = ncomp;
          q.push(other.triangle);
        } else if (flip_state[other.triangle] != want) {
          throw GeometryError("surface is not orientable");
        }
      }
    }
    ++ncomp;
  }

  std::vector<double> volume(ncomp, 0.0);
  for (int t = 0; t < nt; ++t) {
    const Vec3 &a = mesh.corner(t, 0), &b = mesh.corner(t, 1), &c = mesh.corner(t, 2);
    double v = a.dot(b.cross(c));
    volume[component[t]] += flip_state[t] == 1 ? -v : v;
  }
  int flipped = 0;
  for (int t = 0; t < nt; ++t) {
    bool f = (flip_state[t] == 1) != (volume[component[t]] < 0.0);
    if (f) {
      mesh.flip(t);
      ++flipped;
    }
  }
  return flipped;
}

// ---------------------------------------------------------------------------
// File formats

namespace detail {

struct LineReader {
  explicit LineReader(std::istream &stream) : in(stream) {}

  std::istream &in;
  int line_no = 0;
  std::string line;

  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#')
        continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string &msg) const { throw FormatError(msg, line_no); }

  void expect_more(const char *what) {
    if (!next())
      throw FormatError(std::string("unexpected end of file, expected ") + what, line_no + 1);
  }
};

inline TriangleMesh read_off(std::istream &in) {
  LineReader r{in};
  r.expect_more("OFF header");
  std::istringstream head(r.line);
  std::string magic;
  head >> magic;
  if (magic != "OFF")
    r.fail("missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  if (!(head >> nv)) {
    r.expect_more("counts line");
    std::istringstream counts(r.line);
    if (!(counts >> nv >> nf))
      r.fail("malformed counts line");
    counts >> ne;
  } else if (!(head >> nf)) {
    r.fail("malformed counts line");
  }
  if (nv < 0 || nf < 0)
    r.fail("negative element counts");

  std::vector<Vec3> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    r.expect_more("vertex line");
    std::istringstream ls(r.line);
    Vec3 p;
    if (!(ls >> p.x() >> p.y() >> p.z()))
      r.fail("malformed vertex line");
    verts.push_back(p);
  }
  std::vector<TriangleMesh::Triangle> tris;
  tris.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    r.expect_more("face line");
    std::istringstream ls(r.line);
    int count = 0;
    TriangleMesh::Triangle t{};
    if (!(ls >> count))
      r.fail("malformed face line");
    if (count != 3)
      r.fail("only triangular faces are supported, got " + std::to_string(count) + " vertices");
    if (!(ls >> t[0] >> t[1] >> t[2]))
      r.fail("malformed face line");
    for (int v : t)
      if (v < 0 || v >= nv)
        r.fail("face references vertex " + std::to_string(v) + " but only " + std::to_string(nv) +
               " vertices exist");
    tris.push_back(t);
  }
  return TriangleMesh(std::move(verts), std::move(tris));
}

inline TriangleMesh read_gmsh_v2(std::istream &in) {
  LineReader r{in};
  std::vector<Vec3> verts;
  std::unordered_map<long, int> node_index;
  std::vector<TriangleMesh::Triangle> tris;
  std::vector<std::array<long, 3>> raw_tris;
  std::vector<int> raw_lines;
  bool have_format = false, have_nodes = false;

  while (r.next()) {
    std::string tag = r.line.substr(r.line.find_first_not_of(" \t"));
    while (!tag.empty() && (tag.back() == ' ' || tag.back() == '\t'))
      tag.pop_back();
    if (tag == "$MeshFormat") {
      r.expect_more("format line");
      std::istringstream ls(r.line);
      double version = 0;
      int file_type = -1;
      if (!(ls >> version >> file_type))
        r.fail("malformed $MeshFormat line");
      if (version < 2.0 || version >= 3.0)
        r.fail("unsupported gmsh version " + std::to_string(version) + " (need 2.x)");
      if (file_type != 0)
        r.fail("binary gmsh files are not supported");
      r.expect_more("$EndMeshFormat");
      if (r.line.rfind("$EndMeshFormat", 0) != 0)
        r.fail("expected $EndMeshFormat");
      have_format = true;
    } else if (tag == "$Nodes") {
      r.expect_more("node count");
      long n = -1;
      if (!(std::istringstream(r.line) >> n) || n < 0)
        r.fail("malformed node count");
      verts.reserve(n);
      for (long i = 0; i < n; ++i) {
        r.expect_more("node line");
        std::istringstream ls(r.line);
        long id;
        Vec3 p;
        if (!(ls >> id >> p.x() >> p.y() >> p.z()))
          r.fail("malformed node line");
        if (!node_index.emplace(id, static_cast<int>(verts.size())).second)
          r.fail("duplicate node id " + std::to_string(id));
        verts.push_back(p);
      }
      r.expect_more("$EndNodes");
      if (r.line.rfind("$EndNodes", 0) != 0)
        r.fail("expected $EndNodes");
      have_nodes = true;
    } else if (tag == "$Elements") {
      r.expect_more("element count");
      long n = -1;
      if (!(std::istringstream(r.line) >> n) || n < 0)
        r.fail("malformed element count");
      for (long i = 0; i < n; ++i) {
        r.expect_more("element line");
        std::istringstream ls(r.line);
        long id;
        int type, ntags;
        if (!(ls >> id >> type >> ntags) || ntags < 0)
          r.fail("malformed element line");
        for (int k = 0; k < ntags; ++k) {
          long tagv;
          if (!(ls >> tagv))
            r.fail("malformed element tags");
        }
        if (type != 2)
          continue;
        std::array<long, 3> ids{};
        if (!(ls >> ids[0] >> ids[1] >> ids[2]))
          r.fail("malformed triangle node list");
        raw_tris.push_back(ids);
        raw_lines.push_back(r.line_no);
      }
      r.expect_more("$EndElements");
      if (r.line.rfind("$EndElements", 0) != 0)
        r.fail("expected $EndElements");
    } else if (!tag.empty() && tag[0] == '$' && tag.rfind("$End", 0) != 0) {
      // Unknown section: skip to its end marker.
      std::string end = "$End" + tag.substr(1);
      bool found = false;
      while (r.next())
        if (r.line.rfind(end, 0) == 0) {
          found = true;
          break;
        }
      if (!found)
        r.fail("unterminated section " + tag);
    } else {
      r.fail("unexpected content '" + r.line + "'");
    }
  }
  if (!have_format)
    throw FormatError("missing $MeshFormat section", r.line_no);
  if (!have_nodes)
    throw FormatError("missing $Nodes section", r.line_no);

  tris.reserve(raw_tris.size());
  for (std::size_t i = 0; i < raw_tris.size(); ++i) {
    TriangleMesh::Triangle t{};
    for (int k = 0; k < 3; ++k) {
      auto it = node_index.find(raw_tris[i][k]);
      if (it == node_index.end())
        throw FormatError("triangle references unknown node " + std::to_string(raw_tris[i][k]),
                          raw_lines[i]);
      t[k] = it->second;
    }
    tris.push_back(t);
  }
  return TriangleMesh(std::move(verts), std::move(tris));
}

} // namespace detail

inline TriangleMesh read_mesh(std::istream &in, MeshFormat format) {
  return format == MeshFormat::off ? detail::read_off(in) : detail::read_gmsh_v2(in);
}

/// Load a mesh keeping the file's winding. Use orient_outward() to repair it.
inline TriangleMesh load_mesh(const std::string &path, MeshFormat format) {
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot open mesh file '" + path + "'", 0);
  return read_mesh(in, format);
}

inline void write_off(std::ostream &os, const TriangleMesh &mesh) {
  os << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << " 0\n";
  os.precision(17);
  for (const auto &v : mesh.vertices())
    os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto &t : mesh.triangles())
    os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline void write_gmsh_v2(std::ostream &os, const TriangleMesh &mesh) {
  os << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.num_vertices() << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const auto &v = mesh.vertex(static_cast<int>(i));
    os << i + 1 << ' ' << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  os << "$EndNodes\n$Elements\n" << mesh.num_triangles() << '\n';
  for (std::size_t i = 0; i < mesh.num_triangles(); ++i) {
    const auto &t = mesh.triangle(static_cast<int>(i));
    os << i + 1 << " 2 2 1 1 " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  os << "$EndElements\n";
}

inline void save_mesh(const std::string &path, const TriangleMesh &mesh, MeshFormat format) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write mesh file '" + path + "'");
  if (format == MeshFormat::off)
    write_off(os, mesh);
  else
    write_gmsh_v2(os, mesh);
}

} // namespace csie
