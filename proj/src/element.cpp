#include "hdg_biot/element.hpp"

#include <algorithm>
#include <string>

namespace hdg {

namespace {

int trace_code(std::span<const int> lv, int dim) {
  int code = 0, scale = 1;
  for (int j = 0; j < dim; ++j) {
    code += lv[j] * scale;
    scale *= dim + 1;
  }
  return code;
}

Mat tabulate(const BasisSet& basis, const std::vector<Point>& pts) {
  Mat t(pts.size(), basis.size());
  for (std::size_t q = 0; q < pts.size(); ++q) t.row(q) = basis.values(pts[q]).transpose();
  return t;
}

}  // namespace

ReferenceElement::ReferenceElement(int dim, int k)
    : dim_(dim),
      k_(k),
      n_(polynomial_space_size(dim, k)),
      np_(polynomial_space_size(dim, k - 1)),
      m_(polynomial_space_size(dim - 1, k)),
      cell_basis_(dim, k),
      facet_basis_(dim - 1, k),
      cell_rule_(quadrature(dim, 2 * k + 2)),
      cell_source_rule_(quadrature(dim, 2 * k + 4)),
      facet_rule_(quadrature(dim - 1, 2 * k + 2)),
      facet_source_rule_(quadrature(dim - 1, 2 * k + 4)) {
  if (dim != 2 && dim != 3) throw Error("ReferenceElement: dimension must be 2 or 3");
  if (k < 2) throw Error("ReferenceElement: degree must be at least 2");
  cell_values_ = tabulate(cell_basis_, cell_rule_.points);
  cell_source_values_ = tabulate(cell_basis_, cell_source_rule_.points);
  facet_values_ = tabulate(facet_basis_, facet_rule_.points);
  facet_source_values_ = tabulate(facet_basis_, facet_source_rule_.points);
  for (const Point& xi : cell_rule_.points) cell_gradients_.push_back(cell_basis_.gradients(xi));

  int codes = 1;
  for (int j = 0; j < dim; ++j) codes *= dim + 1;
  traces_.resize(codes);
  std::array<int, 3> lv{};
  for (int code = 0; code < codes; ++code) {
    int c = code;
    bool distinct = true;
    for (int j = 0; j < dim; ++j) {
      lv[j] = c % (dim + 1);
      c /= dim + 1;
      for (int i = 0; i < j; ++i) distinct = distinct && lv[i] != lv[j];
    }
    if (!distinct) continue;
    const std::span<const int> verts(lv.data(), dim);
    Trace& t = traces_[code];
    const auto pts = trace_points(dim, verts, facet_rule_.points);
    t.values = tabulate(cell_basis_, pts);
    for (const Point& xi : pts) t.gradients.push_back(cell_basis_.gradients(xi));
    t.source_values = tabulate(cell_basis_, trace_points(dim, verts, facet_source_rule_.points));
  }
}

const ReferenceElement::Trace& ReferenceElement::trace(std::span<const int> local_vertices) const {
  const Trace& t = traces_.at(trace_code(local_vertices, dim_));
  if (t.values.size() == 0) throw Error("ReferenceElement::trace: repeated local vertex");
  return t;
}

LocalLayout LocalLayout::of(const ReferenceElement& ref) {
  LocalLayout l;
  l.dim = ref.dim();
  l.n = ref.n();
  l.np = ref.np();
  l.m = ref.m();
  l.facets = ref.dim() + 1;
  return l;
}

CellIntegrals compute_cell_integrals(const ReferenceElement& ref, const Mesh& mesh, int cell, CellLength length) {
  const int d = ref.dim(), n = ref.n(), np = ref.np(), m = ref.m();
  const AffineMap& map = mesh.affine_map(cell);
  const Mat jinv = map.inverse_jacobian.topLeftCorner(d, d);
  const double detj = std::abs(map.det);

  CellIntegrals ci;
  ci.cell = cell;
  ci.volume = mesh.cell_volume(cell);
  ci.h = cell_length(mesh, cell, length);
  ci.M = Mat::Zero(n, n);
  ci.Keps = Mat::Zero(d * n, d * n);
  ci.G = Mat::Zero(np, np);
  ci.B = Mat::Zero(np, d * n);

  const QuadratureRule& qr = ref.cell_rule();
  Mat grad(n, d);
  for (int q = 0; q < qr.size(); ++q) {
    const double w = qr.weights[q] * detj;
    const auto phi = ref.cell_values().row(q).transpose();
    grad.noalias() = ref.cell_gradients()[q] * jinv;
    ci.M.noalias() += w * phi * phi.transpose();
    const Mat s = w * grad * grad.transpose();
    ci.G += s.topLeftCorner(np, np);
    for (int a = 0; a < d; ++a) {
      ci.Keps.block(a * n, a * n, n, n) += 0.5 * s;
      for (int b = 0; b < d; ++b) ci.Keps.block(a * n, b * n, n, n).noalias() += 0.5 * w * grad.col(b) * grad.col(a).transpose();
      ci.B.block(0, a * n, np, n).noalias() += w * phi.head(np) * grad.col(a).transpose();
    }
  }

  const auto cv = mesh.cell_vertices(cell);
  const auto cf = mesh.cell_facets(cell);
  const QuadratureRule& fr = ref.facet_rule();
  ci.num_facets = d + 1;
  for (int i = 0; i <= d; ++i) {
    FacetIntegrals& fi = ci.facets[i];
    const int f = cf[i];
    fi.facet = f;
    fi.h = ci.h;
    fi.area = mesh.facet_area(f);
    fi.normal = mesh.facet_normal(f, cell);
    fi.boundary = mesh.is_boundary(f);
    fi.marker = mesh.boundary_marker(f);
    std::array<int, 3> lv{};
    const auto fv = mesh.facet_vertices(f);
    for (int j = 0; j < d; ++j) lv[j] = static_cast<int>(std::find(cv.begin(), cv.end(), fv[j]) - cv.begin());
    const auto& tr = ref.trace(std::span<const int>(lv.data(), d));
    const double scale = fi.area / reference_measure(d - 1);
    const Eigen::VectorXd nrm = fi.normal.head(d);

    fi.Tuu = Mat::Zero(n, n);
    fi.Tut = Mat::Zero(n, m);
    fi.Ttt = Mat::Zero(m, m);
    fi.Eu = Mat::Zero(d * n, d * n);
    fi.Et = Mat::Zero(d * m, d * n);
    fi.Bt = Mat::Zero(m, d * n);
    fi.Np = Mat::Zero(np, np);
    fi.Npt = Mat::Zero(m, np);
    for (int q = 0; q < fr.size(); ++q) {
      const double w = fr.weights[q] * scale;
      const auto phi = tr.values.row(q).transpose();
      const auto chi = ref.facet_values().row(q).transpose();
      grad.noalias() = tr.gradients[q] * jinv;
      const Vec dn = grad * nrm;
      fi.Tuu.noalias() += w * phi * phi.transpose();
      fi.Tut.noalias() += w * phi * chi.transpose();
      fi.Ttt.noalias() += w * chi * chi.transpose();
      fi.Np.noalias() += w * phi.head(np) * dn.head(np).transpose();
      fi.Npt.noalias() += w * chi * dn.head(np).transpose();
      for (int a = 0; a < d; ++a) {
        fi.Eu.block(a * n, a * n, n, n).noalias() += 0.5 * w * phi * dn.transpose();
        fi.Et.block(a * m, a * n, m, n).noalias() += 0.5 * w * chi * dn.transpose();
        fi.Bt.block(0, a * n, m, n).noalias() += (w * nrm[a]) * chi * phi.transpose();
        for (int b = 0; b < d; ++b) {
          fi.Eu.block(a * n, b * n, n, n).noalias() += (0.5 * w * nrm[b]) * phi * grad.col(a).transpose();
          fi.Et.block(a * m, b * n, m, n).noalias() += (0.5 * w * nrm[b]) * chi * grad.col(a).transpose();
        }
      }
    }
  }
  return ci;
}

Mat local_elasticity(const CellIntegrals& ci, int d, double mu, double eta, bool symmetric_interior) {
  const int n = static_cast<int>(ci.M.rows());
  const int m = static_cast<int>(ci.facets[0].Ttt.rows());
  const int dn = d * n, dm = d * m;
  Mat A = Mat::Zero(dn + ci.num_facets * dm, dn + ci.num_facets * dm);
  A.topLeftCorner(dn, dn) = mu * ci.Keps;
  for (int i = 0; i < ci.num_facets; ++i) {
    const FacetIntegrals& fi = ci.facets[i];
    const int t0 = dn + i * dm;
    const double c = eta * mu / fi.h;
    for (int a = 0; a < d; ++a) {
      A.block(a * n, a * n, n, n) += c * fi.Tuu;
      A.block(a * n, t0 + a * m, n, m) -= c * fi.Tut;
      A.block(t0 + a * m, a * n, m, n) -= c * fi.Tut.transpose();
      A.block(t0 + a * m, t0 + a * m, m, m) += c * fi.Ttt;
    }
    if (!symmetric_interior) continue;
    A.topLeftCorner(dn, dn) -= mu * (fi.Eu + fi.Eu.transpose());
    A.block(t0, 0, dm, dn) += mu * fi.Et;
    A.block(0, t0, dn, dm) += mu * fi.Et.transpose();
  }
  return A;
}

Mat local_divergence(const CellIntegrals& ci, int d, int np, int m) {
  const int n = static_cast<int>(ci.M.rows());
  const int dn = d * n, dm = d * m;
  Mat D = Mat::Zero(dn + ci.num_facets * dm, np + ci.num_facets * m);
  D.topLeftCorner(dn, np) = -ci.B.transpose();
  for (int i = 0; i < ci.num_facets; ++i) {
    const FacetIntegrals& fi = ci.facets[i];
    D.block(0, np + i * m, dn, m) = fi.Bt.transpose();
    // boundary facets pair qbar with (v - vbar).n so prescribed or free
    // displacement traces enter consistently
    if (!fi.boundary) continue;
    for (int a = 0; a < d; ++a) D.block(dn + i * dm + a * m, np + i * m, m, m) = -fi.normal[a] * fi.Ttt;
  }
  return D;
}

Mat local_diffusion(const CellIntegrals& ci, int np, int m, double kappa, double reaction, double eta,
                    bool symmetric_interior) {
  Mat A = Mat::Zero(np + ci.num_facets * m, np + ci.num_facets * m);
  A.topLeftCorner(np, np) = kappa * ci.G + reaction * ci.M.topLeftCorner(np, np);
  for (int i = 0; i < ci.num_facets; ++i) {
    const FacetIntegrals& fi = ci.facets[i];
    const int t0 = np + i * m;
    const double c = kappa * eta / fi.h;
    A.topLeftCorner(np, np) += c * fi.Tuu.topLeftCorner(np, np);
    A.block(0, t0, np, m) -= c * fi.Tut.topRows(np);
    A.block(t0, 0, m, np) -= c * fi.Tut.topRows(np).transpose();
    A.block(t0, t0, m, m) += c * fi.Ttt;
    if (!symmetric_interior) continue;
    A.topLeftCorner(np, np) -= kappa * (fi.Np + fi.Np.transpose());
    A.block(t0, 0, m, np) += kappa * fi.Npt;
    A.block(0, t0, np, m) += kappa * fi.Npt.transpose();
  }
  return A;
}

namespace {

std::vector<int> concat_ranges(int a0, int na, int b0, int nb) {
  std::vector<int> idx(na + nb);
  for (int i = 0; i < na; ++i) idx[i] = a0 + i;
  for (int i = 0; i < nb; ++i) idx[na + i] = b0 + i;
  return idx;
}

void add_scattered(Mat& A, const std::vector<int>& rows, const std::vector<int>& cols, const Mat& block) {
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) A(rows[i], cols[j]) += block(i, j);
}

}  // namespace

Mat local_biot_matrix(const CellIntegrals& ci, const LocalLayout& L, const ModelParams& prm) {
  const int d = L.dim, n = L.n, np = L.np, m = L.m, F = L.facets;
  const int dn = d * n;
  Mat A = Mat::Zero(L.size(), L.size());

  const auto iu = concat_ranges(L.u(), dn, L.ubar(), F * d * m);
  const auto ipt = concat_ranges(L.pT(), np, L.pTbar(), F * m);
  const auto iz = concat_ranges(L.z(), dn, 0, 0);
  const auto ip = concat_ranges(L.p(), np, L.pbar(), F * m);

  add_scattered(A, iu, iu, local_elasticity(ci, d, prm.mu, prm.eta, true));
  const Mat D = local_divergence(ci, d, np, m);
  add_scattered(A, iu, ipt, D);
  add_scattered(A, ipt, iu, D.transpose());
  // z has no trace, so only the cell rows of b_h apply
  const Mat Dz = D.topRows(dn);
  add_scattered(A, iz, ip, Dz);
  add_scattered(A, ip, iz, Dz.transpose());

  for (int a = 0; a < d; ++a) A.block(L.z() + a * n, L.z() + a * n, n, n) += ci.M / prm.kappa;
  const Mat Mp = ci.M.topLeftCorner(np, np);
  const double il = 1.0 / prm.lambda;
  A.block(L.p(), L.p(), np, np) -= (prm.c0 + prm.alpha * prm.alpha * il) * Mp;
  A.block(L.p(), L.pT(), np, np) += prm.alpha * il * Mp;
  A.block(L.pT(), L.p(), np, np) += prm.alpha * il * Mp;
  A.block(L.pT(), L.pT(), np, np) -= il * Mp;
  return A;
}

Vec local_biot_load(const ReferenceElement& ref, const Mesh& mesh, const CellIntegrals& ci, const LocalLayout& L,
                    const Loads& loads, const std::set<int>& traction_markers) {
  const int d = L.dim, n = L.n, np = L.np, m = L.m;
  Vec F = Vec::Zero(L.size());
  const AffineMap& map = mesh.affine_map(ci.cell);
  const double detj = std::abs(map.det);
  if (loads.body_force || loads.source) {
    const QuadratureRule& qr = ref.cell_source_rule();
    for (int q = 0; q < qr.size(); ++q) {
      const double w = qr.weights[q] * detj;
      const Point x = map.map(qr.points[q]);
      const auto phi = ref.cell_source_values().row(q).transpose();
      if (loads.body_force) {
        const Eigen::Vector3d f = loads.body_force(x);
        for (int a = 0; a < d; ++a) F.segment(L.u() + a * n, n) += (w * f[a]) * phi;
      }
      if (loads.source) F.segment(L.p(), np) -= (w * loads.source(x)[0]) * phi.head(np);
    }
  }
  if (loads.source_coefficients.size() > 0)
    F.segment(L.p(), np) -= ci.M.topLeftCorner(np, np) * loads.source_coefficients.segment(ci.cell * np, np);
  if (loads.traction && !traction_markers.empty()) {
    const QuadratureRule& fr = ref.facet_source_rule();
    for (int i = 0; i < ci.num_facets; ++i) {
      const FacetIntegrals& fi = ci.facets[i];
      if (!fi.boundary || !traction_markers.count(fi.marker)) continue;
      const double scale = fi.area / reference_measure(d - 1);
      for (int q = 0; q < fr.size(); ++q) {
        const Eigen::Vector3d t = loads.traction(facet_point(mesh, fi.facet, fr.points[q]));
        const auto chi = ref.facet_source_values().row(q).transpose();
        for (int a = 0; a < d; ++a) F.segment(L.ubar() + i * d * m + a * m, m) += (fr.weights[q] * scale * t[a]) * chi;
      }
    }
  }
  return F;
}

LocalPreconditioner local_preconditioner(const CellIntegrals& ci, const LocalLayout& L, const ModelParams& prm,
                                         PcVariant variant) {
  const int d = L.dim, n = L.n, np = L.np, m = L.m, F = L.facets;
  const bool hat = variant == PcVariant::Phat;
  LocalPreconditioner pc;
  pc.u = local_elasticity(ci, d, prm.mu, prm.eta, hat);
  pc.pT = Mat::Zero(np + F * m, np + F * m);
  pc.pT.topLeftCorner(np, np) = ci.M.topLeftCorner(np, np) / prm.mu;
  for (int i = 0; i < F; ++i)
    pc.pT.block(np + i * m, np + i * m, m, m) = (ci.facets[i].h / (prm.mu * prm.eta)) * ci.facets[i].Ttt;
  pc.z = Mat::Zero(d * n, d * n);
  for (int a = 0; a < d; ++a) pc.z.block(a * n, a * n, n, n) = ci.M / prm.kappa;
  const double reaction = prm.c0 + prm.alpha * prm.alpha / prm.lambda;
  pc.p = local_diffusion(ci, np, m, prm.kappa, reaction, prm.eta, hat);
  return pc;
}

std::vector<int> cell_trace_dofs(const Mesh& mesh, const DofMap& map, int cell) {
  std::vector<int> out;
  out.reserve((mesh.dim() + 1) * map.entity_size);
  for (int f : mesh.cell_facets(cell)) {
    const auto dofs = map.dofs(f);
    out.insert(out.end(), dofs.begin(), dofs.end());
  }
  return out;
}

void apply_basis_change(Mat& A, int offset, int facets, int components, const Mat& C) {
  const int m = static_cast<int>(C.rows());
  for (int f = 0; f < facets; ++f)
    for (int a = 0; a < components; ++a) {
      const int i = offset + (f * components + a) * m;
      A.middleCols(i, m) = A.middleCols(i, m) * C;
      A.middleRows(i, m) = C.transpose() * A.middleRows(i, m);
    }
}

void apply_basis_change(Vec& F, int offset, int facets, int components, const Mat& C) {
  const int m = static_cast<int>(C.rows());
  for (int f = 0; f < facets; ++f)
    for (int a = 0; a < components; ++a) {
      const int i = offset + (f * components + a) * m;
      F.segment(i, m) = C.transpose() * F.segment(i, m);
    }
}

}  // namespace hdg
