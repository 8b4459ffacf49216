#pragma once

#include "hdg_biot/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace hdg {

/// Reference-to-physical map x = translation + jacobian * xi of one simplex.
struct AffineMap {
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d inverse_jacobian = Eigen::Matrix3d::Identity();
  double det = 1.0;
  Point translation = Point::Zero();
  int dim = 2;

  Point map(const Point& xi) const { return translation + jacobian * xi; }
  Point pull_back(const Point& x) const { return inverse_jacobian * (x - translation); }
};

/// One cell on either side of a facet.
struct FacetNeighbor {
  int cell = -1;
  int local_facet = -1;  // index of the cell vertex opposite the facet
};

/// Simplicial mesh of triangles (dim 2) or tetrahedra (dim 3).
///
/// Cells are positively oriented. Facets are identified by their sorted
/// vertex tuple and ordered lexicographically by that tuple. Local facet i of
/// a cell is the facet opposite local vertex i.
class Mesh {
 public:
  Mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 4>> cells,
       const std::vector<std::pair<std::vector<int>, int>>& boundary_tags = {});

  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_facets() const { return static_cast<int>(facet_vertices_.size()); }
  int vertices_per_cell() const { return dim_ + 1; }

  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::span<const int> cell_vertices(int c) const { return {cells_[c].data(), std::size_t(dim_ + 1)}; }
  std::span<const int> facet_vertices(int f) const { return {facet_vertices_[f].data(), std::size_t(dim_)}; }
  std::span<const int> cell_facets(int c) const { return {cell_facets_[c].data(), std::size_t(dim_ + 1)}; }

  /// Adjacent cells; second entry has cell == -1 on the boundary.
  const std::array<FacetNeighbor, 2>& facet_cells(int f) const { return facet_cells_[f]; }
  bool is_boundary(int f) const { return facet_cells_[f][1].cell < 0; }
  int boundary_marker(int f) const { return boundary_marker_[f]; }  // 0 on interior facets
  void set_boundary_marker(int f, int tag);

  const AffineMap& affine_map(int c) const { return maps_[c]; }
  double cell_volume(int c) const;
  double cell_diameter(int c) const { return diameter_[c]; }  // longest edge
  Point cell_centroid(int c) const;
  Point facet_centroid(int f) const;
  double facet_area(int f) const { return facet_area_[f]; }
  /// Outward unit normal of facet f with respect to the given adjacent cell.
  Point facet_normal(int f, int cell) const;

  /// Undirected edges as sorted vertex pairs (used for EDG numbering and topology checks).
  std::vector<std::array<int, 2>> edges() const;

 private:
  void build_topology(const std::vector<std::pair<std::vector<int>, int>>& boundary_tags);
  void build_geometry();

  int dim_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<std::array<int, 3>> facet_vertices_;
  std::vector<std::array<int, 4>> cell_facets_;
  std::vector<std::array<FacetNeighbor, 2>> facet_cells_;
  std::vector<int> boundary_marker_;
  std::vector<AffineMap> maps_;
  std::vector<double> diameter_;
  std::vector<double> facet_area_;
  std::vector<Point> facet_normal_;  // outward w.r.t. facet_cells_[f][0]
};

/// h_K of a cell under the given definition.
double cell_length(const Mesh& mesh, int cell, CellLength kind);

struct BoundingBox {
  Point lower = Point::Zero();
  Point upper = Point::Ones();
};

/// Structured simplicial mesh of an axis-aligned box.
///
/// Every square is split into 2 triangles (2D) or every cube into 6 Kuhn
/// tetrahedra (3D). Boundary facets are tagged 1/2 (x = lower/upper),
/// 3/4 (y), 5/6 (z).
Mesh unit_box_mesh(int dim, int n, const BoundingBox& box = {});
/// Anisotropic variant with a cell count per axis.
Mesh box_mesh(int dim, std::array<int, 3> n, const BoundingBox& box);

struct FacetGeometry {
  std::vector<Point> normals;     // one outward normal per adjacent cell
  double area = 0.0;
  std::vector<double> diameters;  // h_K of each adjacent cell
};

FacetGeometry facet_geometry(const Mesh& mesh, int facet);

}  // namespace hdg
