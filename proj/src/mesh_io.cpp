#include "hdg_biot/mesh_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace hdg {

namespace {

// Gmsh element type -> number of nodes, -1 for types we reject
int gmsh_node_count(int type) {
  switch (type) {
    case 1: return 2;   // line
    case 2: return 3;   // triangle
    case 4: return 4;   // tetrahedron
    case 15: return 1;  // point
    default: return -1;
  }
}

int gmsh_element_dim(int type) {
  switch (type) {
    case 15: return 0;
    case 1: return 1;
    case 2: return 2;
    case 4: return 3;
    default: return -1;
  }
}

std::string next_line(std::istream& in, const char* section) {
  std::string line;
  if (!std::getline(in, line)) throw Error(std::string("gmsh: malformed section ") + section + ": unexpected end of file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect(std::istream& in, const std::string& tag) {
  std::string line = next_line(in, tag.c_str());
  if (line != tag) throw Error("gmsh: malformed section, expected " + tag + " but found '" + line + "'");
}

}  // namespace

Mesh import_gmsh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("gmsh: cannot open " + path.string());
  return import_gmsh(in);
}

Mesh import_gmsh(std::istream& in) {
  struct Element {
    int type;
    int tag;
    std::vector<int> nodes;
  };
  std::map<long, int> node_index;
  std::vector<Point> nodes;
  std::vector<Element> elements;
  bool have_format = false, have_nodes = false, have_elements = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "$MeshFormat") {
      std::istringstream s(next_line(in, "$MeshFormat"));
      double version = 0;
      int file_type = -1;
      if (!(s >> version >> file_type)) throw Error("gmsh: malformed section $MeshFormat");
      if (version < 2.0 || version >= 3.0) throw Error("gmsh: only format version 2.x is supported");
      if (file_type != 0) throw Error("gmsh: only ASCII files are supported");
      expect(in, "$EndMeshFormat");
      have_format = true;
    } else if (line == "$Nodes") {
      std::istringstream s(next_line(in, "$Nodes"));
      long count = -1;
      if (!(s >> count) || count < 0) throw Error("gmsh: malformed section $Nodes");
      for (long i = 0; i < count; ++i) {
        std::istringstream ls(next_line(in, "$Nodes"));
        long id;
        Point x;
        if (!(ls >> id >> x[0] >> x[1] >> x[2])) throw Error("gmsh: malformed section $Nodes");
        node_index[id] = static_cast<int>(nodes.size());
        nodes.push_back(x);
      }
      expect(in, "$EndNodes");
      have_nodes = true;
    } else if (line == "$Elements") {
      std::istringstream s(next_line(in, "$Elements"));
      long count = -1;
      if (!(s >> count) || count < 0) throw Error("gmsh: malformed section $Elements");
      for (long i = 0; i < count; ++i) {
        std::istringstream ls(next_line(in, "$Elements"));
        long id;
        int type, ntags;
        if (!(ls >> id >> type >> ntags) || ntags < 0) throw Error("gmsh: malformed section $Elements");
        const int nn = gmsh_node_count(type);
        if (nn < 0) throw Error("gmsh: unsupported element type " + std::to_string(type) + " (element " + std::to_string(id) + ")");
        Element e{type, 0, {}};
        for (int t = 0; t < ntags; ++t) {
          int tag;
          if (!(ls >> tag)) throw Error("gmsh: malformed section $Elements");
          if (t == 0) e.tag = tag;
        }
        for (int k = 0; k < nn; ++k) {
          long nid;
          if (!(ls >> nid)) throw Error("gmsh: malformed section $Elements");
          auto it = node_index.find(nid);
          if (it == node_index.end()) throw Error("gmsh: element " + std::to_string(id) + " references unknown node");
          e.nodes.push_back(it->second);
        }
        elements.push_back(std::move(e));
      }
      expect(in, "$EndElements");
      have_elements = true;
    }
  }
  if (!have_format || !have_nodes || !have_elements) throw Error("gmsh: malformed file, missing a required section");

  int dim = 0;
  for (const auto& e : elements) dim = std::max(dim, gmsh_element_dim(e.type));
  if (dim < 2) throw Error("gmsh: file contains no triangles or tetrahedra");
  if (dim == 2)
    for (const auto& x : nodes)
      if (x[2] != 0.0) throw Error("gmsh: mixed dimension, triangle mesh with nonzero z coordinates");

  std::vector<std::array<int, 4>> cells;
  std::vector<std::pair<std::vector<int>, int>> tags;
  std::vector<std::vector<int>> lower_dim;
  for (const auto& e : elements) {
    const int edim = gmsh_element_dim(e.type);
    if (edim == dim) {
      std::array<int, 4> c{-1, -1, -1, -1};
      std::copy(e.nodes.begin(), e.nodes.end(), c.begin());
      cells.push_back(c);
    } else if (edim == dim - 1) {
      tags.emplace_back(e.nodes, e.tag);
    }
  }

  // Only nodes used by cells become mesh vertices.
  std::vector<int> renumber(nodes.size(), -1);
  std::vector<Point> verts;
  for (auto& c : cells)
    for (int i = 0; i <= dim; ++i) {
      int& r = renumber[c[i]];
      if (r < 0) {
        r = static_cast<int>(verts.size());
        verts.push_back(nodes[c[i]]);
      }
      c[i] = r;
    }
  for (auto& [v, tag] : tags)
    for (int& x : v) {
      if (renumber[x] < 0) throw Error("gmsh: mixed dimension, boundary element not attached to any cell");
      x = renumber[x];
    }

  Mesh mesh(dim, std::move(verts), std::move(cells), tags);

  // every tagged lower-dimensional element must be a boundary facet of the cell mesh
  std::map<std::array<int, 3>, int> boundary;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    std::array<int, 3> k{-1, -1, -1};
    auto fv = mesh.facet_vertices(f);
    std::copy(fv.begin(), fv.end(), k.begin());
    boundary[k] = f;
  }
  for (auto& [v, tag] : tags) {
    std::array<int, 3> k{-1, -1, -1};
    std::sort(v.begin(), v.end());
    std::copy(v.begin(), v.end(), k.begin());
    if (!boundary.count(k)) throw Error("gmsh: mixed dimension, lower-dimensional element is not a facet of the cell mesh");
  }
  return mesh;
}

void write_gmsh(const Mesh& mesh, std::ostream& out) {
  const int dim = mesh.dim();
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.num_vertices() << "\n";
  out << std::setprecision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Point& x = mesh.vertex(v);
    out << v + 1 << " " << x[0] << " " << x[1] << " " << x[2] << "\n";
  }
  out << "$EndNodes\n";
  int tagged = 0;
  for (int f = 0; f < mesh.num_facets(); ++f)
    if (mesh.is_boundary(f) && mesh.boundary_marker(f) != 0) ++tagged;
  out << "$Elements\n" << tagged + mesh.num_cells() << "\n";
  int id = 1;
  const int facet_type = dim == 2 ? 1 : 2;
  const int cell_type = dim == 2 ? 2 : 4;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (!mesh.is_boundary(f) || mesh.boundary_marker(f) == 0) continue;
    out << id++ << " " << facet_type << " 2 " << mesh.boundary_marker(f) << " " << mesh.boundary_marker(f);
    for (int v : mesh.facet_vertices(f)) out << " " << v + 1;
    out << "\n";
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << id++ << " " << cell_type << " 2 0 0";
    for (int v : mesh.cell_vertices(c)) out << " " << v + 1;
    out << "\n";
  }
  out << "$EndElements\n";
}

void write_vtk(const Mesh& mesh, const std::vector<VtkPointField>& fields, std::ostream& out) {
  const int dim = mesh.dim();
  const int nv = dim + 1;
  const long npts = static_cast<long>(mesh.num_cells()) * nv;
  for (const auto& f : fields)
    if (static_cast<long>(f.values.size()) != npts * f.components)
      throw Error("write_vtk: field '" + f.name + "' has wrong size");

  out << "# vtk DataFile Version 3.0\nhdg_biot output\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(12);
  out << "POINTS " << npts << " double\n";
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int v : mesh.cell_vertices(c)) {
      const Point& x = mesh.vertex(v);
      out << x[0] << " " << x[1] << " " << x[2] << "\n";
    }
  out << "CELLS " << mesh.num_cells() << " " << static_cast<long>(mesh.num_cells()) * (nv + 1) << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << nv;
    for (int i = 0; i < nv; ++i) out << " " << static_cast<long>(c) * nv + i;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << (dim == 2 ? 5 : 10) << "\n";
  if (fields.empty()) return;
  out << "POINT_DATA " << npts << "\n";
  for (const auto& f : fields) {
    if (f.components == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << v << "\n";
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (long i = 0; i < npts; ++i) {
        for (int a = 0; a < 3; ++a) out << (a < f.components ? f.values[i * f.components + a] : 0.0) << (a < 2 ? " " : "\n");
      }
    }
  }
}

}  // namespace hdg
