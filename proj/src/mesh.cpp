#include "hdg_biot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace hdg {

namespace {

std::array<int, 3> facet_key(std::span<const int> cell, int dim, int local_facet) {
  std::array<int, 3> key{-1, -1, -1};
  int j = 0;
  for (int i = 0; i <= dim; ++i)
    if (i != local_facet) key[j++] = cell[i];
  std::sort(key.begin(), key.begin() + dim);
  return key;
}

double signed_volume(const std::vector<Point>& x, const std::array<int, 4>& c, int dim) {
  if (dim == 2) {
    const Point a = x[c[1]] - x[c[0]], b = x[c[2]] - x[c[0]];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  const Point a = x[c[1]] - x[c[0]], b = x[c[2]] - x[c[0]], d = x[c[3]] - x[c[0]];
  return a.dot(b.cross(d)) / 6.0;
}

}  // namespace

Mesh::Mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 4>> cells,
           const std::vector<std::pair<std::vector<int>, int>>& boundary_tags)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)) {
  if (dim != 2 && dim != 3) throw Error("mesh dimension must be 2 or 3, got " + std::to_string(dim));
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cell = cells_[c];
    for (int i = 0; i <= dim_; ++i)
      if (cell[i] < 0 || cell[i] >= num_vertices())
        throw Error("cell " + std::to_string(c) + " references vertex out of range");
    if (dim_ == 2) cell[3] = -1;
    const double vol = signed_volume(vertices_, cell, dim_);
    if (vol == 0.0) throw Error("degenerate cell " + std::to_string(c));
    if (vol < 0.0) std::swap(cell[dim_ - 1], cell[dim_]);
  }
  build_topology(boundary_tags);
  build_geometry();
}

void Mesh::build_topology(const std::vector<std::pair<std::vector<int>, int>>& boundary_tags) {
  struct Incidence {
    std::array<int, 3> key;
    int cell;
    int local;
  };
  std::vector<Incidence> inc;
  inc.reserve(cells_.size() * (dim_ + 1));
  for (int c = 0; c < num_cells(); ++c)
    for (int i = 0; i <= dim_; ++i) inc.push_back({facet_key(cell_vertices(c), dim_, i), c, i});
  std::sort(inc.begin(), inc.end(), [](const Incidence& a, const Incidence& b) {
    return a.key != b.key ? a.key < b.key : a.cell < b.cell;
  });

  cell_facets_.assign(cells_.size(), {-1, -1, -1, -1});
  for (std::size_t i = 0; i < inc.size();) {
    std::size_t j = i;
    while (j < inc.size() && inc[j].key == inc[i].key) ++j;
    if (j - i > 2) throw Error("non-manifold facet shared by more than two cells");
    const int f = num_facets();
    facet_vertices_.push_back(inc[i].key);
    std::array<FacetNeighbor, 2> nb{};
    for (std::size_t k = i; k < j; ++k) {
      nb[k - i] = {inc[k].cell, inc[k].local};
      cell_facets_[inc[k].cell][inc[k].local] = f;
    }
    facet_cells_.push_back(nb);
    i = j;
  }

  boundary_marker_.assign(facet_vertices_.size(), 0);
  if (boundary_tags.empty()) return;
  std::map<std::array<int, 3>, int> lookup;
  for (int f = 0; f < num_facets(); ++f)
    if (is_boundary(f)) lookup[facet_vertices_[f]] = f;
  for (const auto& [verts, tag] : boundary_tags) {
    if (static_cast<int>(verts.size()) != dim_) continue;
    std::array<int, 3> key{-1, -1, -1};
    std::copy(verts.begin(), verts.end(), key.begin());
    std::sort(key.begin(), key.begin() + dim_);
    if (auto it = lookup.find(key); it != lookup.end()) boundary_marker_[it->second] = tag;
  }
}

double cell_length(const Mesh& mesh, int cell, CellLength kind) {
  if (kind == CellLength::diameter) return mesh.cell_diameter(cell);
  const int d = mesh.dim();
  return std::pow((d == 2 ? 2.0 : 6.0) * mesh.cell_volume(cell), 1.0 / d);
}

void Mesh::build_geometry() {
  maps_.resize(cells_.size());
  diameter_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    const auto v = cell_vertices(c);
    AffineMap m;
    m.dim = dim_;
    m.translation = vertices_[v[0]];
    m.jacobian.setIdentity();
    for (int i = 0; i < dim_; ++i) m.jacobian.col(i).head(dim_) = (vertices_[v[i + 1]] - vertices_[v[0]]).head(dim_);
    m.det = m.jacobian.topLeftCorner(dim_, dim_).determinant();
    m.inverse_jacobian.setIdentity();
    m.inverse_jacobian.topLeftCorner(dim_, dim_) = m.jacobian.topLeftCorner(dim_, dim_).inverse();
    maps_[c] = m;
    double h = 0.0;
    for (int i = 0; i <= dim_; ++i)
      for (int j = i + 1; j <= dim_; ++j) h = std::max(h, (vertices_[v[i]] - vertices_[v[j]]).norm());
    diameter_[c] = h;
  }

  facet_area_.resize(facet_vertices_.size());
  facet_normal_.resize(facet_vertices_.size());
  for (int f = 0; f < num_facets(); ++f) {
    const auto fv = facet_vertices(f);
    if (dim_ == 2) {
      facet_area_[f] = (vertices_[fv[1]] - vertices_[fv[0]]).norm();
    } else {
      facet_area_[f] = 0.5 * (vertices_[fv[1]] - vertices_[fv[0]]).cross(vertices_[fv[2]] - vertices_[fv[0]]).norm();
    }
    // outward normal of the first neighbour: -grad of the barycentric coordinate of the opposite vertex
    const auto [c, i] = facet_cells_[f][0];
    const Eigen::Matrix3d& jinv = maps_[c].inverse_jacobian;
    Point g = Point::Zero();
    if (i == 0) {
      for (int r = 0; r < dim_; ++r) g -= jinv.row(r).transpose();
    } else {
      g = jinv.row(i - 1).transpose();
    }
    g.tail(3 - dim_).setZero();
    facet_normal_[f] = -g.normalized();
  }
}

void Mesh::set_boundary_marker(int f, int tag) {
  if (!is_boundary(f)) throw Error("facet " + std::to_string(f) + " is not on the boundary");
  boundary_marker_[f] = tag;
}

double Mesh::cell_volume(int c) const {
  return dim_ == 2 ? maps_[c].det / 2.0 : maps_[c].det / 6.0;
}

Point Mesh::cell_centroid(int c) const {
  Point x = Point::Zero();
  for (int v : cell_vertices(c)) x += vertices_[v];
  return x / (dim_ + 1);
}

Point Mesh::facet_centroid(int f) const {
  Point x = Point::Zero();
  for (int v : facet_vertices(f)) x += vertices_[v];
  return x / dim_;
}

Point Mesh::facet_normal(int f, int cell) const {
  if (facet_cells_[f][0].cell == cell) return facet_normal_[f];
  if (facet_cells_[f][1].cell == cell) return -facet_normal_[f];
  throw Error("cell " + std::to_string(cell) + " is not adjacent to facet " + std::to_string(f));
}

std::vector<std::array<int, 2>> Mesh::edges() const {
  std::vector<std::array<int, 2>> e;
  e.reserve(cells_.size() * 6);
  for (int c = 0; c < num_cells(); ++c) {
    const auto v = cell_vertices(c);
    for (int i = 0; i <= dim_; ++i)
      for (int j = i + 1; j <= dim_; ++j) e.push_back({std::min(v[i], v[j]), std::max(v[i], v[j])});
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

Mesh box_mesh(int dim, std::array<int, 3> n, const BoundingBox& box) {
  if (dim != 2 && dim != 3) throw Error("box_mesh: dim must be 2 or 3, got " + std::to_string(dim));
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 1) throw Error("box_mesh: need at least one cell per axis");
    if (!(box.upper[a] > box.lower[a])) throw Error("box_mesh: degenerate bounding box");
  }
  const int nx = n[0], ny = n[1], nz = dim == 3 ? n[2] : 0;
  auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };

  std::vector<Point> verts;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        Point x = Point::Zero();
        x[0] = box.lower[0] + (box.upper[0] - box.lower[0]) * i / nx;
        x[1] = box.lower[1] + (box.upper[1] - box.lower[1]) * j / ny;
        if (dim == 3) x[2] = box.lower[2] + (box.upper[2] - box.lower[2]) * k / nz;
        verts.push_back(x);
      }

  std::vector<std::array<int, 4>> cells;
  if (dim == 2) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0), v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
        cells.push_back({v00, v10, v11, -1});
        cells.push_back({v00, v11, v01, -1});
      }
  } else {
    // Kuhn split: one tetrahedron per monotone lattice path from corner 000 to 111
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          for (const auto& p : perms) {
            std::array<int, 3> o{0, 0, 0};
            std::array<int, 4> t{};
            t[0] = vid(i, j, k);
            for (int s = 0; s < 3; ++s) {
              o[p[s]] = 1;
              t[s + 1] = vid(i + o[0], j + o[1], k + o[2]);
            }
            cells.push_back(t);
          }
  }

  Mesh mesh(dim, std::move(verts), std::move(cells));
  const double tol = 1e-12 * (box.upper - box.lower).head(dim).norm();
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    for (int a = 0; a < dim; ++a) {
      bool on_lower = true, on_upper = true;
      for (int v : mesh.facet_vertices(f)) {
        on_lower = on_lower && std::abs(mesh.vertex(v)[a] - box.lower[a]) < tol;
        on_upper = on_upper && std::abs(mesh.vertex(v)[a] - box.upper[a]) < tol;
      }
      if (on_lower) mesh.set_boundary_marker(f, 2 * a + 1);
      if (on_upper) mesh.set_boundary_marker(f, 2 * a + 2);
    }
  }
  return mesh;
}

Mesh unit_box_mesh(int dim, int n, const BoundingBox& box) {
  if (dim != 2 && dim != 3) throw Error("unit_box_mesh: dim must be 2 or 3, got " + std::to_string(dim));
  return box_mesh(dim, {n, n, n}, box);
}

FacetGeometry facet_geometry(const Mesh& mesh, int facet) {
  if (facet < 0 || facet >= mesh.num_facets()) throw Error("facet index out of range");
  FacetGeometry g;
  g.area = mesh.facet_area(facet);
  for (const auto& nb : mesh.facet_cells(facet)) {
    if (nb.cell < 0) continue;
    g.normals.push_back(mesh.facet_normal(facet, nb.cell));
    g.diameters.push_back(mesh.cell_diameter(nb.cell));
  }
  return g;
}

}  // namespace hdg
