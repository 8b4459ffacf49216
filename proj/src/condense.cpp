#include "hdg_biot/condense.hpp"

#include <cmath>
#include <string>

namespace hdg {

namespace {

// S = A22 - A21 A11^{-1} A12 over a local [cell | trace] matrix, symmetrised; lu keeps A11.
void local_schur(const Mat& A, int cs, int cell, Eigen::PartialPivLU<Mat>& lu, Mat& S) {
  const int nt = static_cast<int>(A.rows()) - cs;
  lu.compute(A.topLeftCorner(cs, cs));
  const auto& U = lu.matrixLU();
  for (int i = 0; i < cs; ++i)
    if (U(i, i) == 0.0 || !std::isfinite(U(i, i)))
      throw Error("condense: singular local block in cell " + std::to_string(cell));
  const Mat X = lu.solve(A.topRightCorner(cs, nt));
  S = A.bottomRightCorner(nt, nt) - A.bottomLeftCorner(nt, cs) * X;
  S = 0.5 * (S + S.transpose()).eval();
}

std::vector<int> shifted(std::span<const int> idx, int shift) {
  std::vector<int> out(idx.begin(), idx.end());
  for (int& i : out)
    if (i >= 0) i -= shift;
  return out;
}

struct Extracted {
  Mat A11, A12, A21;
};

// Dense sub-blocks of a sparse matrix for one cell.
void extract(const SpMat& A, std::span<const int> cl, std::span<const int> tl, std::vector<int>& pos, Extracted& e) {
  const int cs = static_cast<int>(cl.size()), nt = static_cast<int>(tl.size());
  e.A11 = Mat::Zero(cs, cs);
  e.A12 = Mat::Zero(cs, nt);
  e.A21 = Mat::Zero(nt, cs);
  for (int i = 0; i < cs; ++i) pos[cl[i]] = i;
  for (int j = 0; j < nt; ++j) pos[tl[j]] = cs + j;
  for (int i = 0; i < cs; ++i)
    for (SpMat::InnerIterator it(A, cl[i]); it; ++it) {
      const int p = pos[it.col()];
      if (p < 0) continue;
      if (p < cs)
        e.A11(i, p) = it.value();
      else
        e.A12(i, p - cs) = it.value();
    }
  for (int j = 0; j < nt; ++j)
    for (SpMat::InnerIterator it(A, tl[j]); it; ++it) {
      const int p = pos[it.col()];
      if (p >= 0 && p < cs) e.A21(j, p) = it.value();
    }
  for (int i : cl) pos[i] = -1;
  for (int j : tl) pos[j] = -1;
}

}  // namespace

double CondensedSystem::asymmetry() const {
  const SpMat t = matrix.transpose();
  const SpMat diff = matrix - t;
  const double amax = matrix.nonZeros() ? matrix.coeffs().abs().maxCoeff() : 0.0;
  const double dmax = diff.nonZeros() ? diff.coeffs().abs().maxCoeff() : 0.0;
  return amax > 0 ? dmax / amax : 0.0;
}

CondensedSystem condense(const BlockSystem& full) {
  const int N = full.size();
  CondensedSystem cs;
  cs.offsets = {0, full.field_size(Field::ubar), full.field_size(Field::ubar) + full.field_size(Field::pTbar), 0};
  cs.offsets[3] = cs.offsets[2] + full.field_size(Field::pbar);
  cs.cell_offsets[0] = 0;
  const std::array<Field, 4> cell_fields{Field::u, Field::pT, Field::z, Field::p};
  for (int i = 0; i < 4; ++i) cs.cell_offsets[i + 1] = cs.cell_offsets[i] + full.field_size(cell_fields[i]);

  std::vector<int> tpos(N, -1), cpos(N, -1);
  const std::array<Field, 3> trace_fields{Field::ubar, Field::pTbar, Field::pbar};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < full.field_size(trace_fields[i]); ++j) tpos[full.offsets[int(trace_fields[i])] + j] = cs.offsets[i] + j;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < full.field_size(cell_fields[i]); ++j) cpos[full.offsets[int(cell_fields[i])] + j] = cs.cell_offsets[i] + j;

  const int ncells = full.cell_dofs.size();
  IndexLists tlists;
  for (int c = 0; c < ncells; ++c) {
    std::vector<int> l;
    for (int g : full.trace_dofs[c]) l.push_back(tpos[g]);
    tlists.push(l);
  }
  cs.matrix = clique_pattern(tlists, cs.size());
  cs.rhs = Vec::Zero(cs.size());
  for (int g = 0; g < N; ++g) {
    if (tpos[g] < 0) continue;
    cs.rhs[tpos[g]] = full.rhs[g];
    for (SpMat::InnerIterator it(full.matrix, g); it; ++it)
      if (tpos[it.col()] >= 0 && it.value() != 0.0) cs.matrix.coeffRef(tpos[g], tpos[it.col()]) += it.value();
  }

  std::vector<int> pos(N, -1);
  Extracted e;
  cs.locals.resize(ncells);
  for (int c = 0; c < ncells; ++c) {
    const auto cl = full.cell_dofs[c];
    const auto tl = full.trace_dofs[c];
    extract(full.matrix, cl, tl, pos, e);
    LocalElimination& le = cs.locals[c];
    const int ncl = static_cast<int>(cl.size()), ntl = static_cast<int>(tl.size());
    Mat local = Mat::Zero(ncl + ntl, ncl + ntl);
    local << e.A11, e.A12, e.A21, Mat::Zero(ntl, ntl);
    Mat SK;
    local_schur(local, ncl, c, le.lu, SK);
    le.coupling = e.A12;
    le.cell_rhs.resize(cl.size());
    for (std::size_t i = 0; i < cl.size(); ++i) le.cell_rhs[i] = full.rhs[cl[i]];
    for (int g : cl) le.cell_index.push_back(cpos[g]);
    for (int g : tl) le.trace_index.push_back(tpos[g]);
    const Vec bK = -e.A21 * le.solve(le.cell_rhs);
    add_block(cs.matrix, le.trace_index, le.trace_index, SK);
    for (std::size_t j = 0; j < tl.size(); ++j) cs.rhs[le.trace_index[j]] += bK[j];
  }
  return cs;
}

CondensedSystem condense_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                              const CondenseOptions& options) {
  params.validate();
  BiotKernel kernel(mesh, spaces, params, loads);
  CondensedSystem cs;
  const int nub = spaces[Field::ubar].num_free, npt = spaces[Field::pTbar].num_free,
            npb = spaces[Field::pbar].num_free;
  cs.offsets = {0, nub, nub + npt, nub + npt + npb};
  const auto off = stacked_offsets(spaces, {0, nub, nub + npt});
  cs.cell_offsets = {off[int(Field::u)], off[int(Field::pT)], off[int(Field::z)], off[int(Field::p)],
                     off[int(Field::p)] + spaces[Field::p].num_dofs};

  const int ncells = mesh.num_cells();
  const int csz = kernel.layout().cell_size();
  IndexLists tlists;
  std::vector<int> idx;
  for (int c = 0; c < ncells; ++c) {
    kernel.indices(c, off, idx);
    tlists.push(std::span<const int>(idx.data() + csz, idx.size() - csz));
  }
  cs.matrix = clique_pattern(tlists, cs.size());
  cs.rhs = Vec::Zero(cs.size());
  if (options.keep_locals) cs.locals.resize(ncells);

  auto body = [&](int c) {
    LocalSystem ls;
    kernel.compute(c, off, ls);
    LocalElimination le;
    Mat SK;
    local_schur(ls.A, csz, c, le.lu, SK);
    const int nt = static_cast<int>(ls.A.rows()) - csz;
    le.cell_rhs = ls.F.head(csz);
    const Vec bK = ls.F.tail(nt) - ls.A.bottomLeftCorner(nt, csz) * le.solve(le.cell_rhs);
    const std::span<const int> tidx(ls.index.data() + csz, nt);
    add_block(cs.matrix, tidx, tidx, SK);
    for (int j = 0; j < nt; ++j)
      if (tidx[j] >= 0) cs.rhs[tidx[j]] += bK[j];
    if (options.keep_locals) {
      le.coupling = ls.A.topRightCorner(csz, nt);
      le.cell_index.assign(ls.index.begin(), ls.index.begin() + csz);
      le.trace_index.assign(tidx.begin(), tidx.end());
      cs.locals[c] = std::move(le);
    }
  };
  if (options.exec == Execution::serial)
    for_each_serial(ncells, body);
  else
    for_each_colored(cell_coloring(mesh, spaces), options.exec, body);
  return cs;
}

Vec back_substitute(const CondensedSystem& sys, const Vec& xbar, Execution exec) {
  if (!sys.can_back_substitute()) throw Error("back_substitute: local solvers were not kept");
  if (xbar.size() != sys.size()) throw Error("back_substitute: trace vector has wrong size");
  Vec out = Vec::Zero(sys.num_cell_unknowns());
  const long ncells = static_cast<long>(sys.locals.size());
  auto body = [&](long c) {
    const LocalElimination& le = sys.locals[c];
    Vec xl(le.trace_index.size());
    for (std::size_t j = 0; j < le.trace_index.size(); ++j) xl[j] = le.trace_index[j] >= 0 ? xbar[le.trace_index[j]] : 0.0;
    const Vec xc = le.solve(le.cell_rhs - le.coupling * xl);
    for (std::size_t i = 0; i < le.cell_index.size(); ++i) out[le.cell_index[i]] = xc[i];
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long c = 0; c < ncells; ++c) body(c);
  } else {
    for (long c = 0; c < ncells; ++c) body(c);
  }
  return out;
}

ReducedPreconditioner::ReducedPreconditioner(PcVariant variant, std::array<SpMat, 3> blocks)
    : variant_(variant), blocks_(std::move(blocks)) {
  offsets_[0] = 0;
  for (int i = 0; i < 3; ++i) {
    offsets_[i + 1] = offsets_[i] + static_cast<int>(blocks_[i].rows());
    try {
      factors_[i] = std::make_shared<SpdFactor>(blocks_[i]);
    } catch (const NotPositiveDefinite&) {
      static const char* names[] = {"displacement", "total pressure", "pressure"};
      throw NotPositiveDefinite(std::string("reduce_preconditioner: ") + names[i] +
                                " trace block is not positive definite");
    }
  }
}

SpMat ReducedPreconditioner::matrix() const {
  std::vector<Eigen::Triplet<double>> t;
  for (int b = 0; b < 3; ++b)
    for (int r = 0; r < blocks_[b].outerSize(); ++r)
      for (SpMat::InnerIterator it(blocks_[b], r); it; ++it)
        t.emplace_back(offsets_[b] + r, offsets_[b] + it.col(), it.value());
  SpMat m(size(), size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void ReducedPreconditioner::apply(const Vec& r, Vec& z) const {
  if (r.size() != size()) throw Error("ReducedPreconditioner::apply: size mismatch");
  z.resize(r.size());
  Vec seg;
  for (int b = 0; b < 3; ++b) {
    const int n = offsets_[b + 1] - offsets_[b];
    if (n == 0) continue;
    factors_[b]->solve(r.segment(offsets_[b], n), seg);
    z.segment(offsets_[b], n) = seg;
  }
}

SpMat reduce_field_block(const FieldBlock& block) {
  const int nt = block.size() - block.num_cell;
  const int ncells = block.cell_dofs.size();
  IndexLists tl;
  for (int c = 0; c < ncells; ++c) tl.push(shifted(block.trace_dofs[c], block.num_cell));
  SpMat S = clique_pattern(tl, nt);
  for (int r = block.num_cell; r < block.size(); ++r)
    for (SpMat::InnerIterator it(block.matrix, r); it; ++it)
      if (it.col() >= block.num_cell && it.value() != 0.0) S.coeffRef(r - block.num_cell, it.col() - block.num_cell) += it.value();
  std::vector<int> pos(block.size(), -1);
  Extracted e;
  for (int c = 0; c < ncells; ++c) {
    const auto cl = block.cell_dofs[c];
    const auto tr = block.trace_dofs[c];
    if (tr.empty()) continue;
    extract(block.matrix, cl, tr, pos, e);
    const int ncl = static_cast<int>(cl.size()), ntl = static_cast<int>(tr.size());
    Mat local = Mat::Zero(ncl + ntl, ncl + ntl);
    local << e.A11, e.A12, e.A21, Mat::Zero(ntl, ntl);
    Eigen::PartialPivLU<Mat> lu;
    Mat SK;
    local_schur(local, ncl, c, lu, SK);
    add_block(S, tl[c], tl[c], SK);
  }
  return S;
}

ReducedPreconditioner reduce_preconditioner(const PreconditionerBlocks& pc) {
  return ReducedPreconditioner(pc.variant, {reduce_field_block(pc.u), reduce_field_block(pc.pT), reduce_field_block(pc.p)});
}

std::array<SpMat, 3> reduced_preconditioner_blocks(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                                   PcVariant variant, Execution exec) {
  params.validate();
  PreconditionerKernel kernel(mesh, spaces, params, variant);
  const auto nc = kernel.num_cell_dofs();
  const auto nt = kernel.num_trace_dofs();
  const std::array<int, 3> which{0, 1, 3};
  std::array<IndexLists, 3> lists;
  LocalPreconditionerSystem ls;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    kernel.indices(c, ls);
    for (int b = 0; b < 3; ++b) {
      const int f = which[b];
      const auto& idx = ls.index[f];
      lists[b].push(shifted(std::span<const int>(idx.data() + ls.cell_size[f], idx.size() - ls.cell_size[f]), nc[f]));
    }
  }
  std::array<SpMat, 3> S;
  for (int b = 0; b < 3; ++b) S[b] = clique_pattern(lists[b], nt[which[b]]);

  auto body = [&](int c) {
    LocalPreconditionerSystem local;
    kernel.compute(c, local);
    Eigen::PartialPivLU<Mat> lu;
    Mat SK;
    for (int b = 0; b < 3; ++b) {
      const int f = which[b];
      local_schur(local.A[f], local.cell_size[f], c, lu, SK);
      add_block(S[b], lists[b][c], lists[b][c], SK);
    }
  };
  if (exec == Execution::serial)
    for_each_serial(mesh.num_cells(), body);
  else
    for_each_colored(cell_coloring(mesh, spaces), exec, body);
  return S;
}

ReducedPreconditioner build_reduced_preconditioner(const Mesh& mesh, const Spaces& spaces, const ModelParams& params,
                                                   PcVariant variant, Execution exec) {
  return ReducedPreconditioner(variant, reduced_preconditioner_blocks(mesh, spaces, params, variant, exec));
}

}  // namespace hdg
