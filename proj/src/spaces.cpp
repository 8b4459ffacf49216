#include "hdg_biot/spaces.hpp"

#include <map>
#include <string>
#include <utility>

namespace hdg {

std::string_view field_name(Field f) {
  switch (f) {
    case Field::u: return "u";
    case Field::ubar: return "ubar";
    case Field::pT: return "pT";
    case Field::pTbar: return "pTbar";
    case Field::z: return "z";
    case Field::p: return "p";
    case Field::pbar: return "pbar";
  }
  return "?";
}

void DofMap::renumber_free() {
  free_index.assign(num_dofs, -1);
  num_free = 0;
  for (int i = 0; i < num_dofs; ++i)
    if (!constrained[i]) free_index[i] = num_free++;
}

Point facet_point(const Mesh& mesh, int facet, const Point& s) {
  const auto fv = mesh.facet_vertices(facet);
  const Point& x0 = mesh.vertex(fv[0]);
  Point x = x0;
  for (int j = 1; j < mesh.dim(); ++j) x += s[j - 1] * (mesh.vertex(fv[j]) - x0);
  return x;
}

namespace {

DofMap cell_map(Field field, int components, int basis_size, int num_cells) {
  DofMap m;
  m.field = field;
  m.components = components;
  m.basis_size = basis_size;
  m.entity_size = components * basis_size;
  m.num_dofs = m.entity_size * num_cells;
  m.entity_dofs.resize(m.num_dofs);
  for (int i = 0; i < m.num_dofs; ++i) m.entity_dofs[i] = i;
  m.constrained.assign(m.num_dofs, 0);
  m.values.assign(m.num_dofs, 0.0);
  m.renumber_free();
  return m;
}

DofMap facet_map(const Mesh& mesh, Field field, int components, int basis_size,
                 const std::function<bool(int)>& facet_constrained) {
  DofMap m;
  m.field = field;
  m.components = components;
  m.basis_size = basis_size;
  m.entity_size = components * basis_size;
  m.num_dofs = m.entity_size * mesh.num_facets();
  m.entity_dofs.resize(m.num_dofs);
  m.constrained.assign(m.num_dofs, 0);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const bool con = facet_constrained(f);
    for (int i = 0; i < m.entity_size; ++i) {
      const int g = f * m.entity_size + i;
      m.entity_dofs[g] = g;
      m.constrained[g] = con;
    }
  }
  m.values.assign(m.num_dofs, 0.0);
  m.renumber_free();
  return m;
}

DofMap edg_map(const Mesh& mesh, int k, const BasisSet& facet_basis,
               const std::function<bool(int)>& facet_constrained) {
  const int d = mesh.dim();
  const auto lattice = lattice_points(d - 1, k);
  const int m = static_cast<int>(lattice.size());
  if (m != facet_basis.size()) throw Error("edg: lattice and facet basis sizes differ");

  DofMap map;
  map.field = Field::ubar;
  map.components = d;
  map.basis_size = m;
  map.entity_size = d * m;
  map.variant = TraceVariant::edg;

  // nodal values -> orthonormal coefficients
  Mat vandermonde(m, m);
  for (int l = 0; l < m; ++l) vandermonde.row(l) = facet_basis.values(lattice[l].xi).transpose();
  map.basis_change = vandermonde.inverse();

  std::map<std::vector<std::pair<int, int>>, int> node_id;
  std::vector<char> node_constrained;
  map.entity_dofs.resize(static_cast<std::size_t>(mesh.num_facets()) * map.entity_size);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const auto fv = mesh.facet_vertices(f);
    const bool con = facet_constrained(f);
    for (int l = 0; l < m; ++l) {
      std::vector<std::pair<int, int>> key;
      for (int j = 0; j < d; ++j)
        if (lattice[l].barycentric[j] > 0) key.emplace_back(fv[j], lattice[l].barycentric[j]);
      auto [it, inserted] = node_id.try_emplace(key, static_cast<int>(node_constrained.size()));
      if (inserted) node_constrained.push_back(0);
      if (con) node_constrained[it->second] = 1;
      for (int a = 0; a < d; ++a) map.entity_dofs[f * map.entity_size + a * m + l] = it->second * d + a;
    }
  }
  map.num_dofs = static_cast<int>(node_constrained.size()) * d;
  map.constrained.resize(map.num_dofs);
  for (int i = 0; i < map.num_dofs; ++i) map.constrained[i] = node_constrained[i / d];
  map.values.assign(map.num_dofs, 0.0);
  map.renumber_free();
  return map;
}

}  // namespace

Spaces build_spaces(const Mesh& mesh, int k, TraceVariant variant, std::set<int> traction_markers) {
  if (k < 2) throw Error("build_spaces: polynomial degree must be at least 2, got " + std::to_string(k));
  Spaces s;
  s.dim = mesh.dim();
  s.k = k;
  s.variant = variant;
  s.traction_markers = std::move(traction_markers);
  s.cell_basis = BasisSet(s.dim, k);
  s.facet_basis = BasisSet(s.dim - 1, k);
  const int d = s.dim;
  const int n = polynomial_space_size(d, k);
  const int np = polynomial_space_size(d, k - 1);
  const int m = polynomial_space_size(d - 1, k);

  auto displacement_constrained = [&](int f) {
    return mesh.is_boundary(f) && !s.traction_markers.count(mesh.boundary_marker(f));
  };
  auto on_boundary = [&](int f) { return mesh.is_boundary(f); };
  auto never = [](int) { return false; };

  s[Field::u] = cell_map(Field::u, d, n, mesh.num_cells());
  s[Field::pT] = cell_map(Field::pT, 1, np, mesh.num_cells());
  s[Field::z] = cell_map(Field::z, d, n, mesh.num_cells());
  s[Field::p] = cell_map(Field::p, 1, np, mesh.num_cells());
  s[Field::ubar] = variant == TraceVariant::hdg ? facet_map(mesh, Field::ubar, d, m, displacement_constrained)
                                                : edg_map(mesh, k, s.facet_basis, displacement_constrained);
  s[Field::pTbar] = facet_map(mesh, Field::pTbar, 1, m, never);
  s[Field::pbar] = facet_map(mesh, Field::pbar, 1, m, on_boundary);
  return s;
}

int set_dirichlet(const Mesh& mesh, Spaces& spaces, Field field, int marker, const FieldFunction& g) {
  if (field != Field::ubar && field != Field::pbar)
    throw Error("set_dirichlet: field " + std::string(field_name(field)) + " cannot carry Dirichlet data");
  DofMap& map = spaces[field];
  const int m = map.basis_size;
  const QuadratureRule q = quadrature(mesh.dim() - 1, 2 * spaces.k + 4);
  Mat chi(q.size(), m);
  for (int p = 0; p < q.size(); ++p) chi.row(p) = spaces.facet_basis.values(q.points[p]).transpose();
  const auto lattice = lattice_points(mesh.dim() - 1, spaces.k);

  std::vector<char> touched(map.num_dofs, 0);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    if (marker >= 0 && mesh.boundary_marker(f) != marker) continue;
    const auto dofs = map.dofs(f);
    if (map.variant == TraceVariant::edg) {
      for (int l = 0; l < m; ++l) {
        const Eigen::Vector3d v = g(facet_point(mesh, f, lattice[l].xi));
        for (int a = 0; a < map.components; ++a) {
          const int dof = dofs[a * m + l];
          if (!map.constrained[dof]) continue;
          map.values[dof] = v[a];
          touched[dof] = 1;
        }
      }
      continue;
    }
    if (!map.constrained[dofs[0]]) continue;
    Eigen::Matrix<double, Eigen::Dynamic, 3> gv(q.size(), 3);
    for (int p = 0; p < q.size(); ++p) gv.row(p) = g(facet_point(mesh, f, q.points[p])).transpose();
    for (int a = 0; a < map.components; ++a)
      for (int l = 0; l < m; ++l) {
        double s = 0.0;
        for (int p = 0; p < q.size(); ++p) s += q.weights[p] * gv(p, a) * chi(p, l);
        const int dof = dofs[a * m + l];
        map.values[dof] = s;
        touched[dof] = 1;
      }
  }
  int count = 0;
  for (char t : touched) count += t;
  return count;
}

SpMat edg_embedding(const Mesh& mesh, const Spaces& edg) {
  const DofMap& map = edg[Field::ubar];
  if (map.variant != TraceVariant::edg) throw Error("edg_embedding: spaces were not built with the EDG variant");
  const int d = mesh.dim(), m = map.basis_size;
  std::vector<Eigen::Triplet<double>> t;
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const auto dofs = map.dofs(f);
    for (int a = 0; a < d; ++a)
      for (int l = 0; l < m; ++l)
        for (int j = 0; j < m; ++j)
          if (map.basis_change(l, j) != 0.0)
            t.emplace_back(f * d * m + a * m + l, dofs[a * m + j], map.basis_change(l, j));
  }
  SpMat e(mesh.num_facets() * d * m, map.num_dofs);
  e.setFromTriplets(t.begin(), t.end());
  return e;
}

}  // namespace hdg
