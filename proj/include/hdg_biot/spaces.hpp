#pragma once

#include "hdg_biot/basis.hpp"
#include "hdg_biot/mesh.hpp"

#include <array>
#include <functional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace hdg {

/// The seven unknown fields, in block order.
enum class Field : int { u = 0, ubar, pT, pTbar, z, p, pbar };
inline constexpr int num_fields = 7;
std::string_view field_name(Field f);
inline bool is_trace(Field f) { return f == Field::ubar || f == Field::pTbar || f == Field::pbar; }

enum class TraceVariant { hdg, edg };

/// Evaluates up to three components of a field at a physical point.
using FieldFunction = std::function<Eigen::Vector3d(const Point&)>;

/// Degree-of-freedom map of one field.
///
/// Cell fields number their dofs cell by cell (local index
/// component * basis_size + i). Trace fields list, per facet, the global dofs
/// of component * facet_basis_size + i. For the EDG displacement trace,
/// global dofs are Lagrange nodes shared between facets and `basis_change`
/// converts a facet's nodal values (per component) into orthonormal
/// facet-basis coefficients.
struct DofMap {
  Field field = Field::u;
  int components = 1;
  int basis_size = 0;    // scalar basis functions per entity
  int entity_size = 0;   // components * basis_size
  int num_dofs = 0;
  TraceVariant variant = TraceVariant::hdg;
  std::vector<int> entity_dofs;      // num_entities * entity_size
  std::vector<char> constrained;     // per dof
  std::vector<double> values;        // prescribed values of constrained dofs
  std::vector<int> free_index;       // -1 for constrained dofs
  int num_free = 0;
  Mat basis_change;                  // empty unless EDG

  std::span<const int> dofs(int entity) const {
    return {entity_dofs.data() + static_cast<std::size_t>(entity) * entity_size, std::size_t(entity_size)};
  }
  bool has_basis_change() const { return basis_change.size() > 0; }
  int num_constrained() const { return num_dofs - num_free; }
  void renumber_free();
};

/// All seven dof maps plus the data they were built from.
struct Spaces {
  int dim = 2;
  int k = 2;
  TraceVariant variant = TraceVariant::hdg;
  std::set<int> traction_markers;  // boundary tags where the displacement trace is left free
  std::array<DofMap, num_fields> maps;
  BasisSet cell_basis;   // P_k on the reference cell
  BasisSet facet_basis;  // P_k on the reference facet

  const DofMap& operator[](Field f) const { return maps[static_cast<int>(f)]; }
  DofMap& operator[](Field f) { return maps[static_cast<int>(f)]; }
  int cell_size(int degree) const { return polynomial_space_size(dim, degree); }
  int facet_size() const { return polynomial_space_size(dim - 1, k); }
};

/// Builds the dof maps of u, ubar, pT, pTbar, z, p, pbar.
///
/// Displacement and pressure traces are constrained on every boundary facet
/// except those tagged with one of `traction_markers` (displacement only);
/// the total-pressure trace is never constrained. Constrained values start
/// at zero.
Spaces build_spaces(const Mesh& mesh, int k, TraceVariant variant, std::set<int> traction_markers = {});

/// Prescribes constrained trace values on facets with the given boundary tag
/// (any tag when marker < 0) by facet-wise L2 projection (HDG) or nodal
/// interpolation (EDG). Returns the number of dofs set.
int set_dirichlet(const Mesh& mesh, Spaces& spaces, Field field, int marker, const FieldFunction& g);

/// Sparse map from EDG displacement-trace dofs to HDG coefficients
/// (rows: HDG layout facet * d * m + a * m + l, columns: EDG dofs).
SpMat edg_embedding(const Mesh& mesh, const Spaces& edg);

/// Physical point of a facet-reference coordinate. The facet is
/// parametrised from its sorted vertex tuple.
Point facet_point(const Mesh& mesh, int facet, const Point& s);

}  // namespace hdg
