#pragma once

#include "hdg_biot/element.hpp"
#include "hdg_biot/kernels.hpp"

#include <array>
#include <memory>

namespace hdg {

/// Element matrix, load and global indices of one cell after the EDG basis
/// change and Dirichlet lifting. Index -1 marks a constrained dof.
struct LocalSystem {
  Mat A;
  Vec F;
  std::vector<int> index;
  int cell_size = 0;  // leading entries belong to cell unknowns
};

/// Computes the local Biot systems of a mesh. Global indices of field f are
/// offsets[f] + free dof number within f.
class BiotKernel {
 public:
  BiotKernel(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads);

  const LocalLayout& layout() const { return layout_; }
  const ReferenceElement& reference() const { return ref_; }

  void compute(int cell, const std::array<int, num_fields>& offsets, LocalSystem& out) const;
  /// Global index lists per cell, split into cell and trace parts.
  void indices(int cell, const std::array<int, num_fields>& offsets, std::vector<int>& out) const;

 private:
  const Mesh& mesh_;
  const Spaces& spaces_;
  ModelParams params_;
  const Loads& loads_;
  ReferenceElement ref_;
  LocalLayout layout_;
};

/// Monolithic system over the free dofs, fields stacked in Field order.
struct BlockSystem {
  SpMat matrix;
  Vec rhs;
  std::array<int, num_fields + 1> offsets{};
  IndexLists cell_dofs;   // cell unknowns of every cell
  IndexLists trace_dofs;  // free trace unknowns touching every cell (no repeats)

  int size() const { return offsets[num_fields]; }
  int field_size(Field f) const { return offsets[int(f) + 1] - offsets[int(f)]; }
  SpMat block(Field row, Field col) const;
  Vec segment(const Vec& x, Field f) const { return x.segment(offsets[int(f)], field_size(f)); }
  /// max |A - A^T| / max |A|.
  double asymmetry() const;
};

BlockSystem assemble_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                          Execution exec = Execution::parallel);

/// One field block of a preconditioner over [cell dofs | free trace dofs].
struct FieldBlock {
  SpMat matrix;
  int num_cell = 0;
  IndexLists cell_dofs;
  IndexLists trace_dofs;

  int size() const { return static_cast<int>(matrix.rows()); }
  SpMat cell_cell() const;
  SpMat trace_trace() const;
};

struct PreconditionerBlocks {
  PcVariant variant = PcVariant::P;
  FieldBlock u, pT, z, p;
};

PreconditionerBlocks assemble_preconditioner(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                             PcVariant variant, Execution exec = Execution::parallel);

/// Local preconditioner blocks of one cell with global indices (cell part
/// first, trace part offset by the field's cell-dof count).
struct LocalPreconditionerSystem {
  std::array<Mat, 4> A;  // u, pT, z, p
  std::array<std::vector<int>, 4> index;
  std::array<int, 4> cell_size{};
};

class PreconditionerKernel {
 public:
  PreconditionerKernel(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, PcVariant variant);
  void compute(int cell, LocalPreconditionerSystem& out) const;
  void indices(int cell, LocalPreconditionerSystem& out) const;
  std::array<int, 4> num_cell_dofs() const;
  std::array<int, 4> num_trace_dofs() const;

 private:
  const Mesh& mesh_;
  const Spaces& spaces_;
  ModelParams params_;
  PcVariant variant_;
  ReferenceElement ref_;
  LocalLayout layout_;
};

/// Source data of one backward-Euler step:
/// g = tau g~ + c0 p^{n-1} + alpha / lambda (alpha p^{n-1} - pT^{n-1}).
/// p_prev and pT_prev hold Q_h coefficients in the p-field layout (may be empty for zero).
Loads assemble_timestep_rhs(const ModelParams& params, const FieldFunction& g_tilde, const Vec& p_prev,
                            const Vec& pT_prev, double tau);

/// Groups cells so that no two cells of a group share a facet or a
/// displacement-trace dof (safe concurrent scatter).
std::vector<std::vector<int>> cell_coloring(const Mesh& mesh, const Spaces& spaces);

/// Offsets of the cell fields u, pT, z, p inside one stacked vector, followed
/// by the trace offsets given.
std::array<int, num_fields> stacked_offsets(const Spaces& spaces, const std::array<int, 3>& trace_offsets);

}  // namespace hdg
