#pragma once

#include "hdg_biot/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdg {

/// Reads a Gmsh ASCII v2.2 file containing triangles or tetrahedra.
/// Physical tags of boundary elements (lines in 2D, triangles in 3D) become
/// boundary markers.
Mesh import_gmsh(const std::filesystem::path& path);
Mesh import_gmsh(std::istream& in);

/// Writes cells and tagged boundary facets as Gmsh ASCII v2.2.
void write_gmsh(const Mesh& mesh, std::ostream& out);

/// Point data attached to every (cell, local vertex) pair of a VTK output.
struct VtkPointField {
  std::string name;
  int components = 1;
  std::vector<double> values;  // num_cells * (dim+1) * components
};

/// Legacy-VTK ASCII unstructured grid. Each cell gets its own copy of its
/// vertices so discontinuous fields can be exported without averaging.
void write_vtk(const Mesh& mesh, const std::vector<VtkPointField>& fields, std::ostream& out);

}  // namespace hdg
