#include "hdg_biot/assembly.hpp"

#include <algorithm>

namespace hdg {

namespace {

void append_trace(const Mesh& mesh, const DofMap& map, int cell, int offset, std::vector<int>& out) {
  for (int f : mesh.cell_facets(cell))
    for (int dof : map.dofs(f)) {
      const int fr = map.free_index[dof];
      out.push_back(fr < 0 ? -1 : offset + fr);
    }
}

void append_range(int begin, int count, std::vector<int>& out) {
  for (int i = 0; i < count; ++i) out.push_back(begin + i);
}

std::vector<int> unique_nonnegative(std::span<const int> idx) {
  std::vector<int> out;
  for (int i : idx)
    if (i >= 0) out.push_back(i);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexLists cell_conflict_lists(const Mesh& mesh, const Spaces& spaces, int& num_indices) {
  const DofMap& ub = spaces[Field::ubar];
  IndexLists lists;
  std::vector<int> l;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    l.clear();
    for (int f : mesh.cell_facets(c)) {
      l.push_back(f);
      for (int dof : ub.dofs(f)) l.push_back(mesh.num_facets() + dof);
    }
    lists.push(l);
  }
  num_indices = mesh.num_facets() + ub.num_dofs;
  return lists;
}

}  // namespace

std::vector<std::vector<int>> cell_coloring(const Mesh& mesh, const Spaces& spaces) {
  int n = 0;
  const IndexLists lists = cell_conflict_lists(mesh, spaces, n);
  return color_lists(lists, n);
}

BiotKernel::BiotKernel(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads)
    : mesh_(mesh), spaces_(spaces), params_(params), loads_(loads), ref_(mesh.dim(), spaces.k) {
  if (params.dim != mesh.dim() || params.k != spaces.k)
    throw Error("assemble_biot: parameter dim/k do not match mesh and spaces");
  layout_ = LocalLayout::of(ref_);
}

void BiotKernel::indices(int cell, const std::array<int, num_fields>& off, std::vector<int>& out) const {
  const LocalLayout& L = layout_;
  const int dn = L.dim * L.n;
  out.clear();
  out.reserve(L.size());
  append_range(off[int(Field::u)] + cell * dn, dn, out);
  append_range(off[int(Field::pT)] + cell * L.np, L.np, out);
  append_range(off[int(Field::z)] + cell * dn, dn, out);
  append_range(off[int(Field::p)] + cell * L.np, L.np, out);
  append_trace(mesh_, spaces_[Field::ubar], cell, off[int(Field::ubar)], out);
  append_trace(mesh_, spaces_[Field::pTbar], cell, off[int(Field::pTbar)], out);
  append_trace(mesh_, spaces_[Field::pbar], cell, off[int(Field::pbar)], out);
}

void BiotKernel::compute(int cell, const std::array<int, num_fields>& off, LocalSystem& out) const {
  const LocalLayout& L = layout_;
  const CellIntegrals ci = compute_cell_integrals(ref_, mesh_, cell, params_.cell_length);
  out.A = local_biot_matrix(ci, L, params_);
  out.F = local_biot_load(ref_, mesh_, ci, L, loads_, spaces_.traction_markers);
  out.cell_size = L.cell_size();
  const DofMap& ub = spaces_[Field::ubar];
  if (ub.has_basis_change()) {
    apply_basis_change(out.A, L.ubar(), L.facets, L.dim, ub.basis_change);
    apply_basis_change(out.F, L.ubar(), L.facets, L.dim, ub.basis_change);
  }
  indices(cell, off, out.index);

  // Dirichlet lifting of constrained trace values
  int slot = L.ubar();
  for (Field fld : {Field::ubar, Field::pTbar, Field::pbar}) {
    const DofMap& map = spaces_[fld];
    for (int f : mesh_.cell_facets(cell))
      for (int dof : map.dofs(f)) {
        if (map.constrained[dof] && map.values[dof] != 0.0) out.F -= out.A.col(slot) * map.values[dof];
        ++slot;
      }
  }
}

SpMat BlockSystem::block(Field row, Field col) const {
  return matrix.block(offsets[int(row)], offsets[int(col)], field_size(row), field_size(col));
}

double BlockSystem::asymmetry() const {
  const SpMat t = matrix.transpose();
  const SpMat diff = matrix - t;
  const double amax = matrix.size() ? matrix.coeffs().abs().maxCoeff() : 0.0;
  const double dmax = diff.nonZeros() ? diff.coeffs().abs().maxCoeff() : 0.0;
  return amax > 0 ? dmax / amax : 0.0;
}

BlockSystem assemble_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                          Execution exec) {
  params.validate();
  BiotKernel kernel(mesh, spaces, params, loads);
  BlockSystem sys;
  sys.offsets[0] = 0;
  for (int f = 0; f < num_fields; ++f) sys.offsets[f + 1] = sys.offsets[f] + spaces.maps[f].num_free;
  std::array<int, num_fields> off{};
  std::copy_n(sys.offsets.begin(), num_fields, off.begin());

  IndexLists all;
  std::vector<int> idx;
  const int cs = kernel.layout().cell_size();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    kernel.indices(c, off, idx);
    all.push(idx);
    sys.cell_dofs.push(std::span<const int>(idx.data(), cs));
    sys.trace_dofs.push(unique_nonnegative(std::span<const int>(idx.data() + cs, idx.size() - cs)));
  }
  sys.matrix = clique_pattern(all, sys.size());
  sys.rhs = Vec::Zero(sys.size());

  auto body = [&](int c) {
    LocalSystem ls;
    kernel.compute(c, off, ls);
    add_block(sys.matrix, ls.index, ls.index, ls.A);
    for (std::size_t i = 0; i < ls.index.size(); ++i)
      if (ls.index[i] >= 0) sys.rhs[ls.index[i]] += ls.F[i];
  };
  if (exec == Execution::serial)
    for_each_serial(mesh.num_cells(), body);
  else
    for_each_colored(cell_coloring(mesh, spaces), exec, body);
  return sys;
}

SpMat FieldBlock::cell_cell() const { return matrix.topLeftCorner(num_cell, num_cell); }
SpMat FieldBlock::trace_trace() const {
  return matrix.bottomRightCorner(size() - num_cell, size() - num_cell);
}

PreconditionerKernel::PreconditionerKernel(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                           PcVariant variant)
    : mesh_(mesh), spaces_(spaces), params_(params), variant_(variant), ref_(mesh.dim(), spaces.k) {
  if (params.dim != mesh.dim() || params.k != spaces.k)
    throw Error("assemble_preconditioner: parameter dim/k do not match mesh and spaces");
  layout_ = LocalLayout::of(ref_);
}

std::array<int, 4> PreconditionerKernel::num_cell_dofs() const {
  return {spaces_[Field::u].num_dofs, spaces_[Field::pT].num_dofs, spaces_[Field::z].num_dofs,
          spaces_[Field::p].num_dofs};
}

std::array<int, 4> PreconditionerKernel::num_trace_dofs() const {
  return {spaces_[Field::ubar].num_free, spaces_[Field::pTbar].num_free, 0, spaces_[Field::pbar].num_free};
}

void PreconditionerKernel::indices(int cell, LocalPreconditionerSystem& out) const {
  const LocalLayout& L = layout_;
  const int dn = L.dim * L.n;
  const auto nc = num_cell_dofs();
  for (auto& v : out.index) v.clear();
  append_range(cell * dn, dn, out.index[0]);
  append_trace(mesh_, spaces_[Field::ubar], cell, nc[0], out.index[0]);
  append_range(cell * L.np, L.np, out.index[1]);
  append_trace(mesh_, spaces_[Field::pTbar], cell, nc[1], out.index[1]);
  append_range(cell * dn, dn, out.index[2]);
  append_range(cell * L.np, L.np, out.index[3]);
  append_trace(mesh_, spaces_[Field::pbar], cell, nc[3], out.index[3]);
  out.cell_size = {dn, L.np, dn, L.np};
}

void PreconditionerKernel::compute(int cell, LocalPreconditionerSystem& out) const {
  const CellIntegrals ci = compute_cell_integrals(ref_, mesh_, cell, params_.cell_length);
  LocalPreconditioner pc = local_preconditioner(ci, layout_, params_, variant_);
  const DofMap& ub = spaces_[Field::ubar];
  if (ub.has_basis_change()) apply_basis_change(pc.u, layout_.dim * layout_.n, layout_.facets, layout_.dim, ub.basis_change);
  out.A = {std::move(pc.u), std::move(pc.pT), std::move(pc.z), std::move(pc.p)};
  indices(cell, out);
}

PreconditionerBlocks assemble_preconditioner(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                             PcVariant variant, Execution exec) {
  params.validate();
  PreconditionerKernel kernel(mesh, spaces, params, variant);
  const auto nc = kernel.num_cell_dofs();
  const auto nt = kernel.num_trace_dofs();
  PreconditionerBlocks pb;
  pb.variant = variant;
  std::array<FieldBlock*, 4> blocks{&pb.u, &pb.pT, &pb.z, &pb.p};
  std::array<IndexLists, 4> all;
  LocalPreconditionerSystem ls;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    kernel.indices(c, ls);
    for (int b = 0; b < 4; ++b) {
      const auto& idx = ls.index[b];
      all[b].push(idx);
      blocks[b]->cell_dofs.push(std::span<const int>(idx.data(), ls.cell_size[b]));
      blocks[b]->trace_dofs.push(
          unique_nonnegative(std::span<const int>(idx.data() + ls.cell_size[b], idx.size() - ls.cell_size[b])));
    }
  }
  for (int b = 0; b < 4; ++b) {
    blocks[b]->num_cell = nc[b];
    blocks[b]->matrix = clique_pattern(all[b], nc[b] + nt[b]);
  }
  auto body = [&](int c) {
    LocalPreconditionerSystem local;
    kernel.compute(c, local);
    for (int b = 0; b < 4; ++b) add_block(blocks[b]->matrix, local.index[b], local.index[b], local.A[b]);
  };
  if (exec == Execution::serial)
    for_each_serial(mesh.num_cells(), body);
  else
    for_each_colored(cell_coloring(mesh, spaces), exec, body);
  return pb;
}

Loads assemble_timestep_rhs(const ModelParams& params, const FieldFunction& g_tilde, const Vec& p_prev,
                            const Vec& pT_prev, double tau) {
  if (!(tau > 0)) throw Error("assemble_timestep_rhs: time step must be positive");
  Loads loads;
  if (g_tilde)
    loads.source = [g_tilde, tau](const Point& x) -> Eigen::Vector3d { return tau * g_tilde(x); };
  const Eigen::Index n = std::max(p_prev.size(), pT_prev.size());
  if (n > 0) {
    Vec p = p_prev.size() ? p_prev : Vec::Zero(n);
    Vec pT = pT_prev.size() ? pT_prev : Vec::Zero(n);
    if (p.size() != pT.size()) throw Error("assemble_timestep_rhs: previous p and pT sizes differ");
    const double r = params.alpha / params.lambda;
    loads.source_coefficients = params.c0 * p + r * (params.alpha * p - pT);
  }
  return loads;
}

std::array<int, num_fields> stacked_offsets(const Spaces& spaces, const std::array<int, 3>& trace_offsets) {
  std::array<int, num_fields> off{};
  off[int(Field::u)] = 0;
  off[int(Field::pT)] = off[int(Field::u)] + spaces[Field::u].num_dofs;
  off[int(Field::z)] = off[int(Field::pT)] + spaces[Field::pT].num_dofs;
  off[int(Field::p)] = off[int(Field::z)] + spaces[Field::z].num_dofs;
  off[int(Field::ubar)] = trace_offsets[0];
  off[int(Field::pTbar)] = trace_offsets[1];
  off[int(Field::pbar)] = trace_offsets[2];
  return off;
}

}  // namespace hdg
