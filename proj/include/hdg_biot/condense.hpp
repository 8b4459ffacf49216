#pragma once

#include "hdg_biot/assembly.hpp"
#include "hdg_biot/krylov.hpp"

#include <array>
#include <memory>

namespace hdg {

/// Stored local solver of one cell: the factorised cell block, its coupling
/// to the cell's trace unknowns and the cell part of the load.
struct LocalElimination {
  Eigen::PartialPivLU<Mat> lu;  // of A11
  Mat coupling;   // A12: cell rows x trace columns
  Vec cell_rhs;   // F1 (Dirichlet lifting included)
  std::vector<int> cell_index;   // into the stacked cell vector [u | pT | z | p]
  std::vector<int> trace_index;  // into the condensed vector, -1 if constrained

  /// A11^{-1} b.
  Vec solve(const Vec& b) const { return lu.solve(b); }
};

/// Schur complement system over the free traces, ordered [ubar | pTbar | pbar].
struct CondensedSystem {
  SpMat matrix;
  Vec rhs;
  std::array<int, 4> offsets{};       // ubar, pTbar, pbar, end
  std::array<int, 5> cell_offsets{};  // u, pT, z, p, end in the stacked cell vector
  std::vector<LocalElimination> locals;

  int size() const { return offsets[3]; }
  int num_cell_unknowns() const { return cell_offsets[4]; }
  bool can_back_substitute() const { return !locals.empty(); }
  double asymmetry() const;
};

/// Eliminates the cell unknowns of an assembled monolithic system.
CondensedSystem condense(const BlockSystem& full);

struct CondenseOptions {
  Execution exec = Execution::parallel;
  bool keep_locals = true;  // needed for back-substitution
};

/// Builds the condensed system element by element without forming the
/// monolithic matrix.
CondensedSystem condense_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                              const CondenseOptions& options = {});

/// Cell unknowns [u | pT | z | p] from the trace solution: A11^{-1} (F1 - A12 xbar) per cell.
Vec back_substitute(const CondensedSystem& sys, const Vec& xbar, Execution exec = Execution::parallel);

/// Block-diagonal reduced preconditioner over [ubar | pTbar | pbar].
class ReducedPreconditioner {
 public:
  ReducedPreconditioner() = default;
  ReducedPreconditioner(PcVariant variant, std::array<SpMat, 3> blocks);

  PcVariant variant() const { return variant_; }
  const SpMat& block(int i) const { return blocks_[i]; }
  const std::array<int, 4>& offsets() const { return offsets_; }
  int size() const { return offsets_[3]; }
  /// Assembled block-diagonal matrix (for diagnostics).
  SpMat matrix() const;
  /// z = S_P^{-1} r.
  void apply(const Vec& r, Vec& z) const;

 private:
  PcVariant variant_ = PcVariant::P;
  std::array<SpMat, 3> blocks_;
  std::array<int, 4> offsets_{};
  std::array<std::shared_ptr<SpdFactor>, 3> factors_;
};

/// Trace Schur complement of one field block, cell by cell.
SpMat reduce_field_block(const FieldBlock& block);

ReducedPreconditioner reduce_preconditioner(const PreconditionerBlocks& pc);

/// Streaming variant of assemble_preconditioner followed by reduce_preconditioner.
ReducedPreconditioner build_reduced_preconditioner(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                                   PcVariant variant, Execution exec = Execution::parallel);

/// Unfactorised trace blocks of the streaming path (u, pT, p).
std::array<SpMat, 3> reduced_preconditioner_blocks(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                                   PcVariant variant, Execution exec = Execution::parallel);

}  // namespace hdg
